"""Filter/rank scoring over candidate sentences.

Every enabled criterion is evaluated per sentence. Filter-mode criteria
exclude outright; ranker-mode criteria each contribute a positional
subscore: candidates are sorted per criterion (descending value when a high
value is bad, ascending for the two positively-correlated criteria), ties
share a dense 1-based position, and the best candidate receives the highest
position. The goodness score G is the sum of subscores and final rank order
is descending G with ascending sentence id as tie-break.

Rejected sentences are always reported with the criteria that hit them;
with retain_suboptimal they are additionally ranked among themselves by how
few filters they matched.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .classifier import CefrModel, classify
from .corpus import AnnotatedSentence, SearchQuery, concordance_search
from .criteria import (
    BINARY_IDS,
    CATALOG_BY_ID,
    CriterionValue,
    POSITIVE_IDS,
    eval_rule_based,
)
from .features import extract_features
from .lexicons import Lexicons
from .levels import distance
from .tagset import DEFAULT_TAGSET, TagsetConfig

MODES = ("off", "filter", "ranker")


class SelectionError(ValueError):
    pass


@dataclass(frozen=True)
class CriterionConfig:
    id: str
    mode: str = "off"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.id not in CATALOG_BY_ID:
            raise SelectionError(f"unknown criterion {self.id!r}")
        if self.mode not in MODES:
            raise SelectionError(f"{self.id}: mode must be one of {MODES}")
        if self.mode == "ranker" and self.id in BINARY_IDS:
            raise SelectionError(f"{self.id}: binary criteria cannot rank")


@dataclass
class SelectionConfig:
    query: SearchQuery
    criteria: dict[str, CriterionConfig] = field(default_factory=dict)
    retain_suboptimal: bool = False
    # equal weighting is the contract; the hook exists for experimentation
    weights: dict[str, float] = field(default_factory=dict)

    def enabled(self, mode: str) -> list[str]:
        return [cid for cid, cfg in self.criteria.items() if cfg.mode == mode]

    def params_map(self) -> dict[str, dict]:
        return {cid: cfg.params for cid, cfg in self.criteria.items() if cfg.params}


@dataclass
class SelectionResult:
    sentence_id: str
    text: str
    rank: int | None
    goodness: float
    subscores: dict[str, int]
    criterion_values: list[CriterionValue]
    filtered_by: list[str] = field(default_factory=list)
    sentence: AnnotatedSentence | None = None  # not serialized


@dataclass
class SelectionOutcome:
    status: str                      # "ok" or "no_matches"
    results: list[SelectionResult]
    rejected: list[SelectionResult]


def _eval_l2_level(sent: AnnotatedSentence, query: SearchQuery, params: dict,
                   lexicons: Lexicons, model: CefrModel,
                   tagset: TagsetConfig) -> CriterionValue:
    fv = extract_features(sent, query.target_level, lexicons, tagset)
    predicted, _probs = classify(model, fv)
    dist = distance(predicted, query.target_level)
    max_distance = int(params.get("max_distance",
                                  CATALOG_BY_ID["l2_level"].params["max_distance"]))
    return CriterionValue("l2_level", float(dist), dist > max_distance)


def evaluate_all(sentences: list[AnnotatedSentence], config: SelectionConfig,
                 lexicons: Lexicons, model: CefrModel | None = None,
                 tagset: TagsetConfig = DEFAULT_TAGSET,
                 ) -> list[tuple[AnnotatedSentence, list[CriterionValue]]]:
    """Evaluate every enabled criterion for every sentence."""
    enabled = {cid for cid, cfg in config.criteria.items() if cfg.mode != "off"}
    if "l2_level" in enabled and model is None:
        raise SelectionError("l2_level is enabled but no classifier model is loaded")
    params = config.params_map()
    out = []
    for sent in sentences:
        try:
            values = [v for v in eval_rule_based(sent, config.query, params,
                                                 tagset, lexicons)
                      if v.id in enabled]
            if "l2_level" in enabled:
                values.append(_eval_l2_level(sent, config.query,
                                             params.get("l2_level", {}),
                                             lexicons, model, tagset))
        except Exception as exc:
            raise SelectionError(f"criterion evaluation failed for sentence "
                                 f"{sent.id!r}: {exc}") from exc
        out.append((sent, values))
    return out


def apply_filters(evaluated: list[tuple[AnnotatedSentence, list[CriterionValue]]],
                  config: SelectionConfig,
                  ) -> tuple[list[tuple[AnnotatedSentence, list[CriterionValue]]],
                             list[tuple[AnnotatedSentence, list[CriterionValue], list[str]]]]:
    """Split candidates on filter-mode criteria; a sentence is rejected as
    soon as any filter triggered. Rejected entries carry every criterion
    that hit; under retain_suboptimal they are ordered by ascending number
    of filter hits (ties by sentence id)."""
    filters = set(config.enabled("filter"))
    passed = []
    rejected = []
    for sent, values in evaluated:
        hits = [v.id for v in values if v.id in filters and v.triggered]
        if hits:
            rejected.append((sent, values, hits))
        else:
            passed.append((sent, values))
    if config.retain_suboptimal:
        rejected.sort(key=lambda item: (len(item[2]), item[0].id))
    return passed, rejected


def _dense_positions(values: list[float], positive: bool) -> list[int]:
    """1-based dense position of each value in its sorted order, worst
    first: for a negative ranker larger values are worse, so position 1 is
    the largest; the best candidate ends up with the highest position."""
    distinct = sorted(set(values), reverse=not positive)
    position = {v: i + 1 for i, v in enumerate(distinct)}
    return [position[v] for v in values]


def rank(passed: list[tuple[AnnotatedSentence, list[CriterionValue]]],
         config: SelectionConfig) -> list[SelectionResult]:
    """Assign subscores, goodness and final ranks to filter-surviving
    candidates."""
    rankers = [cid for cid in config.enabled("ranker")]
    results = []
    per_criterion: dict[str, list[int]] = {}
    for cid in rankers:
        col = []
        for _sent, values in passed:
            value = next(v.value for v in values if v.id == cid)
            col.append(value)
        per_criterion[cid] = _dense_positions(col, positive=cid in POSITIVE_IDS)

    for i, (sent, values) in enumerate(passed):
        subscores = {cid: per_criterion[cid][i] for cid in rankers}
        goodness = 0.0
        for cid, sub in subscores.items():
            goodness += config.weights.get(cid, 1.0) * sub
        if goodness.is_integer():
            goodness = int(goodness)
        results.append(SelectionResult(
            sentence_id=sent.id, text=sent.text, rank=None, goodness=goodness,
            subscores=subscores, criterion_values=list(values), sentence=sent))

    results.sort(key=lambda r: (-r.goodness, r.sentence_id))
    for pos, result in enumerate(results, start=1):
        result.rank = pos
    return results


def select(corpus: list[AnnotatedSentence], config: SelectionConfig,
           lexicons: Lexicons, model: CefrModel | None = None,
           tagset: TagsetConfig = DEFAULT_TAGSET,
           top_k: int | None = None) -> SelectionOutcome:
    """Full pipeline: concordance search, criterion evaluation, filtering,
    ranking, optional truncation to the top_k ranked candidates."""
    candidates = concordance_search(corpus, config.query)
    if not candidates:
        return SelectionOutcome(status="no_matches", results=[], rejected=[])
    evaluated = evaluate_all(candidates, config, lexicons, model, tagset)
    passed, rejected = apply_filters(evaluated, config)
    results = rank(passed, config) if passed else []
    if top_k is not None:
        results = results[:top_k]

    rejected_results = []
    for pos, (sent, values, hits) in enumerate(rejected, start=1):
        rejected_results.append(SelectionResult(
            sentence_id=sent.id, text=sent.text,
            rank=pos if config.retain_suboptimal else None,
            goodness=0, subscores={}, criterion_values=list(values),
            filtered_by=hits, sentence=sent))
    return SelectionOutcome(status="ok", results=results, rejected=rejected_results)


def select_best_per_lemma(corpus: list[AnnotatedSentence], lemmas: list[str],
                          config: SelectionConfig, lexicons: Lexicons,
                          model: CefrModel | None = None,
                          tagset: TagsetConfig = DEFAULT_TAGSET,
                          ) -> dict[str, SelectionResult | None]:
    """Batch mode: run the pipeline once per lemma and keep only each
    lemma's top-ranked candidate (None when nothing survives)."""
    from dataclasses import replace

    best: dict[str, SelectionResult | None] = {}
    for lemma in lemmas:
        query = replace(config.query, term=lemma, match_kind="lemma")
        cfg = SelectionConfig(query=query, criteria=config.criteria,
                              retain_suboptimal=False, weights=config.weights)
        outcome = select(corpus, cfg, lexicons, model, tagset, top_k=1)
        best[lemma] = outcome.results[0] if outcome.results else None
    return best


def _value_to_dict(v: CriterionValue) -> dict:
    return {"id": v.id, "value": v.value, "triggered": v.triggered,
            "evidence": list(v.evidence)}


def result_to_dict(r: SelectionResult) -> dict:
    return {
        "id": r.sentence_id,
        "text": r.text,
        "rank": r.rank,
        "goodness": r.goodness,
        "subscores": dict(r.subscores),
        "criteria": [_value_to_dict(v) for v in r.criterion_values],
        "filtered_by": list(r.filtered_by),
    }


def outcome_to_dict(outcome: SelectionOutcome, config: SelectionConfig,
                    config_echo: dict | None = None) -> dict:
    """The published result schema; key order is stable for golden files."""
    return {
        "query": {
            "term": config.query.term,
            "match_kind": config.query.match_kind,
            "pos": config.query.pos,
            "target_level": config.query.target_level,
            "max_candidates": config.query.max_candidates,
        },
        "config_echo": config_echo if config_echo is not None else {},
        "status": outcome.status,
        "results": [result_to_dict(r) for r in outcome.results],
        "rejected": [result_to_dict(r) for r in outcome.rejected],
    }
