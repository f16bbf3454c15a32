"""Outcome metrics over teacher ratings and learner responses.

Implements the study computations: per-item difficulty (share of correct
answers) with groupings, chance-corrected ideal item difficulty for
word-bank exercises, Krippendorff's alpha over a coincidence matrix
(nominal or squared-ordinal-distance metric), Spearman rank correlation
with averaged tie ranks, and the distribution of pairwise level-assignment
distances. Rating/response data are input formats; none are bundled.
"""
from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field

from .levels import is_level, ordinal

log = logging.getLogger(__name__)

RATING_SCALE = (1, 2, 3, 4)
SUITABILITY_THRESHOLD = 2.5


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class RatingRecord:
    rater: str
    sentence: str
    scores: dict[str, int] = field(default_factory=dict)  # l2/ctx/overall -> 1..4
    suggested_level: str | None = None

    def __post_init__(self):
        for name, value in self.scores.items():
            if value not in RATING_SCALE:
                raise EvaluationError(
                    f"rating {name}={value} outside the 1-4 scale "
                    f"(rater {self.rater}, sentence {self.sentence})")


@dataclass(frozen=True)
class ResponseRecord:
    student: str
    student_level: str
    exercise: str
    item: str
    answer: str
    correct: bool


def parse_ratings(stream) -> list[RatingRecord]:
    """CSV columns: rater,sentence,l2,ctx,overall,level (overall and level
    may be blank)."""
    records = []
    reader = csv.DictReader(stream)
    required = {"rater", "sentence", "l2", "ctx"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise EvaluationError(f"ratings CSV needs columns {sorted(required)}")
    for row in reader:
        scores = {}
        for name in ("l2", "ctx", "overall"):
            raw = (row.get(name) or "").strip()
            if raw:
                scores[name] = int(raw)
        level = (row.get("level") or "").strip() or None
        if level is not None and not is_level(level):
            raise EvaluationError(f"bad CEFR level {level!r}")
        records.append(RatingRecord(rater=row["rater"].strip(),
                                    sentence=row["sentence"].strip(),
                                    scores=scores, suggested_level=level))
    return records


def read_ratings(path: str) -> list[RatingRecord]:
    with open(path, encoding="utf-8", newline="") as f:
        return parse_ratings(f)


def parse_responses(stream) -> list[ResponseRecord]:
    """CSV columns: student,level,exercise,item,answer,correct."""
    records = []
    truthy = {"1", "true", "yes", "y"}
    falsy = {"0", "false", "no", "n"}
    reader = csv.DictReader(stream)
    required = {"student", "level", "exercise", "item", "answer", "correct"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise EvaluationError(f"responses CSV needs columns {sorted(required)}")
    for row in reader:
        raw = row["correct"].strip().casefold()
        if raw in truthy:
            correct = True
        elif raw in falsy:
            correct = False
        else:
            raise EvaluationError(f"bad boolean {row['correct']!r}")
        level = row["level"].strip()
        if not is_level(level):
            raise EvaluationError(f"bad CEFR level {level!r}")
        records.append(ResponseRecord(
            student=row["student"].strip(), student_level=level,
            exercise=row["exercise"].strip(), item=row["item"].strip(),
            answer=row["answer"].strip(), correct=correct))
    return records


def read_responses(path: str) -> list[ResponseRecord]:
    with open(path, encoding="utf-8", newline="") as f:
        return parse_responses(f)


def item_difficulty(responses: list[ResponseRecord],
                    group_by: tuple[str, ...] = (),
                    item_meta: dict[str, dict[str, str]] | None = None,
                    ) -> dict[str, float]:
    """Fraction of correct answers per item, or per group when group_by
    names response/metadata attributes (level, exercise, mode, pos ...).

    `item_meta` supplies per-exercise attributes (e.g. mode, pos, exercise
    level) keyed by exercise id. Groups without responses are simply absent;
    a warning is logged when metadata is missing for a grouping key.
    """
    if not responses:
        raise EvaluationError("no responses")
    groups: dict[str, list[bool]] = defaultdict(list)
    for r in responses:
        if group_by:
            parts = []
            skip = False
            for key in group_by:
                if key == "level":
                    parts.append(r.student_level)
                elif key == "exercise":
                    parts.append(r.exercise)
                elif key == "item":
                    parts.append(f"{r.exercise}/{r.item}")
                else:
                    meta = (item_meta or {}).get(r.exercise, {})
                    if key not in meta:
                        log.warning("no %r metadata for exercise %s; response skipped",
                                    key, r.exercise)
                        skip = True
                        break
                    parts.append(meta[key])
            if skip:
                continue
            group = "/".join(parts)
        else:
            group = f"{r.exercise}/{r.item}"
        groups[group].append(r.correct)
    return {g: sum(vals) / len(vals) for g, vals in sorted(groups.items())}


def chance_probability(n_items: int, n_options: int) -> float:
    """Mean chance of guessing each gap right under sequential elimination:
    1/n_options for the first item, 1/(n_options-1) for the next, and so
    on."""
    if n_items < 1 or n_options < n_items:
        raise EvaluationError(f"need n_options >= n_items >= 1, "
                              f"got {n_items}/{n_options}")
    return sum(1.0 / (n_options - i + 1) for i in range(1, n_items + 1)) / n_items


def ideal_item_difficulty(p_chance: float) -> float:
    """Chance-adjusted difficulty target: halfway between the chance rate
    and a perfect score."""
    if not 0.0 <= p_chance <= 1.0:
        raise EvaluationError(f"p_chance must be within [0, 1], got {p_chance}")
    return p_chance + (1.0 - p_chance) / 2.0


def _nominal_delta(a, b) -> float:
    return 0.0 if a == b else 1.0


def _ordinal_distance_delta(a, b) -> float:
    av = ordinal(a) if isinstance(a, str) else float(a)
    bv = ordinal(b) if isinstance(b, str) else float(b)
    return (av - bv) ** 2


ALPHA_METRICS = {"nominal": _nominal_delta, "ordinal-distance": _ordinal_distance_delta}


def krippendorff_alpha(ratings: list[list], metric: str = "nominal") -> float:
    """Krippendorff's alpha for a rater x item matrix with None for missing
    cells.

    Uses the coincidence-matrix formulation: within each item, every
    ordered value pair contributes 1/(m-1); observed disagreement is the
    delta-weighted sum over the matrix, expected disagreement the same sum
    over the marginals. Items with fewer than two ratings drop out. A
    degenerate input (every pairable value identical) returns 1.0 by
    convention.
    """
    if metric not in ALPHA_METRICS:
        raise EvaluationError(f"metric must be one of {sorted(ALPHA_METRICS)}")
    delta = ALPHA_METRICS[metric]

    if not ratings:
        raise EvaluationError("empty rating matrix")
    n_items = max(len(row) for row in ratings)
    units: list[list] = []
    for j in range(n_items):
        vals = [row[j] for row in ratings if j < len(row) and row[j] is not None]
        if len(vals) >= 2:
            units.append(vals)
    if len(units) < 2:
        raise EvaluationError("need at least 2 items with at least 2 ratings each")

    coincidence: dict[tuple, float] = defaultdict(float)
    marginals: dict[object, float] = defaultdict(float)
    n = 0.0
    for vals in units:
        m = len(vals)
        n += m
        for i, a in enumerate(vals):
            for j, b in enumerate(vals):
                if i != j:
                    coincidence[(a, b)] += 1.0 / (m - 1)
    for (a, _b), weight in coincidence.items():
        marginals[a] += weight

    d_observed = sum(w * delta(a, b) for (a, b), w in coincidence.items()) / n
    d_expected = sum(
        marginals[a] * marginals[b] * delta(a, b)
        for a in marginals for b in marginals
    ) / (n * (n - 1))
    if d_expected == 0.0:
        log.warning("degenerate agreement data (no expected disagreement); alpha = 1.0")
        return 1.0
    return 1.0 - d_observed / d_expected


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman_rho(x: list[float], y: list[float]) -> float:
    """Pearson correlation of average ranks (ties share their mean rank)."""
    if len(x) != len(y):
        raise EvaluationError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise EvaluationError("need at least 3 pairs")
    rx = _average_ranks([float(v) for v in x])
    ry = _average_ranks([float(v) for v in y])
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0.0 or vy == 0.0:
        raise EvaluationError("zero rank variance (constant input)")
    return cov / math.sqrt(vx * vy)


DISTANCE_BUCKETS = ("0", "1", "2", ">=3")


def level_distance_table(assignments: list[dict]) -> dict[str, dict[str, float]]:
    """Distribution of pairwise CEFR distances.

    Each assignment is {"teachers": [levels...], "system": level-or-None}.
    Every unordered teacher pair and every (teacher, system) pair
    contributes one integer distance; columns report bucket percentages
    (0/1/2/>=3) and sum to 100.
    """
    tt: list[int] = []
    ts: list[int] = []
    for a in assignments:
        teachers = [lvl for lvl in a.get("teachers", []) if lvl]
        system = a.get("system")
        for i in range(len(teachers)):
            for j in range(i + 1, len(teachers)):
                tt.append(abs(ordinal(teachers[i]) - ordinal(teachers[j])))
            if system:
                ts.append(abs(ordinal(teachers[i]) - ordinal(system)))

    def bucketize(distances: list[int]) -> dict[str, float]:
        if not distances:
            return {b: 0.0 for b in DISTANCE_BUCKETS}
        counts = {b: 0 for b in DISTANCE_BUCKETS}
        for d in distances:
            counts[str(d) if d < 3 else ">=3"] += 1
        return {b: 100.0 * c / len(distances) for b, c in counts.items()}

    return {"teacher_teacher": bucketize(tt), "teacher_system": bucketize(ts)}


def suitability_share(ratings: list[RatingRecord], score: str = "ctx",
                      threshold: float = SUITABILITY_THRESHOLD) -> float:
    """Share of sentences whose mean rating on `score` exceeds `threshold`."""
    per_sentence: dict[str, list[int]] = defaultdict(list)
    for r in ratings:
        if score in r.scores:
            per_sentence[r.sentence].append(r.scores[score])
    if not per_sentence:
        raise EvaluationError(f"no ratings carry the score {score!r}")
    ok = sum(1 for vals in per_sentence.values() if sum(vals) / len(vals) > threshold)
    return ok / len(per_sentence)
