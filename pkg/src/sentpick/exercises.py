"""Word-bank exercise assembly from selected sentences.

An exercise is five gapped sentences plus a shuffled bank of six surface
forms: the five answers and one distractor that fits no gap. The gap is the
syntactic head of the sentence's first search-term match. In `same_msd`
mode all bank forms share POS and morphology, so only lexical knowledge
disambiguates; `mixed_pos` banks mix categories. Distractor selection is
automated (a same-level pool with morphology compatibility checks and a
no-gap-lemma-collision rule — a heuristic stand-in for a manual pick) and a
manual override is honored.

Worksheets bundle nine exercises: five at the target level and two each
from one level below and above, five of them same_msd and four mixed_pos.
When the scale offers no level below (or above) the target, those two
exercises are dropped — the documented reduced worksheet.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import AnnotatedSentence, Token
from .lexicons import Lexicons
from .levels import CLASSIFIER_LEVELS
from .ranking import SelectionResult
from .tagset import DEFAULT_TAGSET, TagsetConfig

GAP_MARK = "___"
EXERCISE_MODES = ("same_msd", "mixed_pos")

DEFAULT_ITEMS = 5


class ExerciseError(ValueError):
    pass


@dataclass(frozen=True)
class DistractorCandidate:
    form: str
    lemma: str
    pos: str
    msd: str


@dataclass(frozen=True)
class ExerciseItem:
    sentence_id: str
    gapped_text: str
    answer_form: str
    answer_lemma: str
    gap_index: int          # 1-based token index of the gap


@dataclass
class Exercise:
    id: str
    mode: str
    level: str
    items: list[ExerciseItem]
    word_bank: list[str]
    distractor: str
    bank_msd: str | None = None
    seed: int = 0


@dataclass
class Worksheet:
    target_level: str
    exercises: list[Exercise]
    level_mix: dict[str, int]
    seed: int = 0


def gap_token(sent: AnnotatedSentence) -> Token:
    """Head token of the first match span (the token whose own head lies
    outside the span)."""
    if not sent.match_spans:
        raise ExerciseError(f"sentence {sent.id!r} has no search-term match")
    a, b = sent.match_spans[0]
    for idx in range(a, b + 1):
        tok = sent.token_at(idx)
        if tok.head == 0 or not (a <= tok.head <= b):
            return tok
    return sent.token_at(a)


def _gapped_text(sent: AnnotatedSentence, gap_index: int) -> str:
    forms = [GAP_MARK if t.index == gap_index else t.form for t in sent.tokens]
    return " ".join(forms)


def distractor_pool_from_corpus(corpus: list[AnnotatedSentence], lexicons: Lexicons,
                                level: str, tagset: TagsetConfig = DEFAULT_TAGSET,
                                ) -> list[DistractorCandidate]:
    """Content tokens whose lemma the graded list places exactly at `level`,
    in corpus order, deduplicated by surface form."""
    seen: set[str] = set()
    pool = []
    for sent in corpus:
        for t in sent.tokens:
            if t.lemma is None or t.pos not in tagset.lexical_tags():
                continue
            # sentence-initial capitalization would leak the token's origin
            if t.form[:1].isupper() and not t.lemma[:1].isupper():
                continue
            if lexicons.kelly.level(t.lemma, t.pos) != level:
                continue
            key = t.form.casefold()
            if key in seen:
                continue
            seen.add(key)
            pool.append(DistractorCandidate(form=t.form, lemma=t.lemma,
                                            pos=t.pos, msd=t.msd))
    return pool


def _pick_items(results: list[SelectionResult], mode: str,
                n_items: int) -> tuple[list[tuple[SelectionResult, Token]], str | None]:
    """Choose gap-compatible results with pairwise-distinct sentences,
    answer forms and lemmas; in same_msd mode all gaps must share POS+msd
    (the largest compatible group wins, earliest first on ties)."""
    gaps: list[tuple[SelectionResult, Token]] = []
    for r in results:
        if r.sentence is None:
            raise ExerciseError(f"result {r.sentence_id!r} lacks its sentence")
        gaps.append((r, gap_token(r.sentence)))

    def distinct_prefix(cands: list[tuple[SelectionResult, Token]]):
        chosen = []
        forms: set[str] = set()
        lemmas: set[str] = set()
        sentences: set[str] = set()
        for r, tok in cands:
            fkey = tok.form.casefold()
            lkey = tok.lemma or fkey
            if fkey in forms or lkey in lemmas or r.sentence_id in sentences:
                continue
            chosen.append((r, tok))
            forms.add(fkey)
            lemmas.add(lkey)
            sentences.add(r.sentence_id)
            if len(chosen) == n_items:
                break
        return chosen

    if mode == "mixed_pos":
        chosen = distinct_prefix(gaps)
        if len(chosen) < n_items:
            raise ExerciseError(f"found {len(chosen)} of {n_items} usable sentences")
        return chosen, None

    groups: dict[tuple[str, str], list[tuple[SelectionResult, Token]]] = {}
    order: list[tuple[str, str]] = []
    for r, tok in gaps:
        key = (tok.pos, tok.msd)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append((r, tok))
    best_key = max(order, key=lambda k: (len(groups[k]), -order.index(k)))
    chosen = distinct_prefix(groups[best_key])
    if len(chosen) < n_items:
        raise ExerciseError(
            f"found {len(chosen)} of {n_items} sentences sharing POS+msd "
            f"{best_key[0]}/{best_key[1]}")
    return chosen, best_key[1]


def _pick_distractor(chosen: list[tuple[SelectionResult, Token]], mode: str,
                     bank_msd: str | None,
                     leftovers: list[tuple[SelectionResult, Token]],
                     pool: list[DistractorCandidate] | None,
                     manual: str | None) -> str:
    answer_forms = {tok.form.casefold() for _r, tok in chosen}
    answer_lemmas = {(tok.lemma or tok.form.casefold()) for _r, tok in chosen}
    if manual is not None:
        if manual.casefold() in answer_forms:
            raise ExerciseError(f"manual distractor {manual!r} equals an answer")
        return manual

    def fits(form: str, lemma: str | None, pos: str, msd: str) -> bool:
        if form.casefold() in answer_forms:
            return False
        if (lemma or form.casefold()) in answer_lemmas:
            return False
        if mode == "same_msd":
            ref_pos = chosen[0][1].pos
            return pos == ref_pos and msd == bank_msd
        return True

    for cand in pool or []:
        if fits(cand.form, cand.lemma, cand.pos, cand.msd):
            return cand.form
    for _r, tok in leftovers:
        if fits(tok.form, tok.lemma, tok.pos, tok.msd):
            return tok.form
    raise ExerciseError("no viable distractor found")


def build_exercise(results: list[SelectionResult], mode: str, level: str,
                   rng_seed: int, n_items: int = DEFAULT_ITEMS,
                   distractor_pool: list[DistractorCandidate] | None = None,
                   manual_distractor: str | None = None,
                   exercise_id: str | None = None) -> Exercise:
    """Assemble one word-bank exercise from ranked selection results."""
    if mode not in EXERCISE_MODES:
        raise ExerciseError(f"mode must be one of {EXERCISE_MODES}")
    if level not in CLASSIFIER_LEVELS:
        raise ExerciseError(f"level must be one of {CLASSIFIER_LEVELS}")
    chosen, bank_msd = _pick_items(results, mode, n_items)
    used_ids = {r.sentence_id for r, _tok in chosen}
    leftovers = []
    for r in results:
        if r.sentence_id in used_ids or r.sentence is None:
            continue
        try:
            leftovers.append((r, gap_token(r.sentence)))
        except ExerciseError:
            continue
    distractor = _pick_distractor(chosen, mode, bank_msd, leftovers,
                                  distractor_pool, manual_distractor)

    items = []
    for r, tok in chosen:
        items.append(ExerciseItem(
            sentence_id=r.sentence_id,
            gapped_text=_gapped_text(r.sentence, tok.index),
            answer_form=tok.form,
            answer_lemma=tok.lemma or tok.form.casefold(),
            gap_index=tok.index,
        ))
    bank = [item.answer_form for item in items] + [distractor]
    random.Random(rng_seed).shuffle(bank)
    return Exercise(
        id=exercise_id or f"{level}-{mode}-{rng_seed}",
        mode=mode, level=level, items=items, word_bank=bank,
        distractor=distractor, bank_msd=bank_msd, seed=rng_seed,
    )


# worksheet composition: (level offset, mode) -> count; five same_msd and
# four mixed_pos overall, 5 target / 2 below / 2 above
_WORKSHEET_PLAN = (
    (0, "same_msd", 3), (0, "mixed_pos", 2),
    (-1, "same_msd", 1), (-1, "mixed_pos", 1),
    (+1, "same_msd", 1), (+1, "mixed_pos", 1),
)


def build_worksheet(exercise_pools: dict[str, dict[str, list[Exercise]]],
                    target_level: str, seed: int) -> Worksheet:
    """Compose a worksheet from prebuilt exercises per level and mode.

    Raises when a needed pool runs short; levels missing from the scale
    (below A1, above C1) are skipped, which yields the reduced 7-exercise
    worksheet at the scale edges.
    """
    if target_level not in CLASSIFIER_LEVELS:
        raise ExerciseError(f"level must be one of {CLASSIFIER_LEVELS}")
    idx = CLASSIFIER_LEVELS.index(target_level)
    taken: dict[tuple[str, str], int] = {}
    picked: list[Exercise] = []
    for offset, mode, count in _WORKSHEET_PLAN:
        j = idx + offset
        if j < 0 or j >= len(CLASSIFIER_LEVELS):
            continue
        level = CLASSIFIER_LEVELS[j]
        pool = exercise_pools.get(level, {}).get(mode, [])
        start = taken.get((level, mode), 0)
        if len(pool) - start < count:
            raise ExerciseError(
                f"not enough {mode} exercises at level {level}: "
                f"need {count}, have {len(pool) - start}")
        picked.extend(pool[start:start + count])
        taken[(level, mode)] = start + count

    random.Random(seed).shuffle(picked)
    mix: dict[str, int] = {}
    for ex in picked:
        mix[ex.level] = mix.get(ex.level, 0) + 1
    return Worksheet(target_level=target_level, exercises=picked,
                     level_mix=mix, seed=seed)


def build_exercise_pools(corpus: list[AnnotatedSentence], seeds: dict, seed: int,
                         config, lexicons: Lexicons, model=None,
                         tagset: TagsetConfig = DEFAULT_TAGSET,
                         ) -> dict[str, dict[str, list[Exercise]]]:
    """One exercise per seed group.

    `seeds` maps level -> list of {"terms": [...], "mode": ...} groups; each
    group becomes an exercise built from its terms' top-ranked candidates
    (the group's level overrides the query's target). Exercise seeds derive
    deterministically from `seed` by group order.
    """
    from dataclasses import replace

    from .ranking import select_best_per_lemma

    pools: dict[str, dict[str, list[Exercise]]] = {}
    counter = 0
    for level, groups in seeds.items():
        pools[level] = {"same_msd": [], "mixed_pos": []}
        for group in groups:
            mode = group.get("mode", "same_msd")
            if mode not in EXERCISE_MODES:
                raise ExerciseError(f"mode must be one of {EXERCISE_MODES}")
            level_config = replace(
                config, query=replace(config.query, target_level=level))
            best = select_best_per_lemma(corpus, group["terms"], level_config,
                                         lexicons, model, tagset)
            results = [r for r in best.values() if r is not None]
            pool = distractor_pool_from_corpus(corpus, lexicons, level, tagset)
            exercise = build_exercise(results, mode, level, seed + counter,
                                      distractor_pool=pool)
            counter += 1
            pools[level][mode].append(exercise)
    return pools


def assemble_from_seeds(corpus: list[AnnotatedSentence], seeds: dict,
                        target_level: str, seed: int, config, lexicons: Lexicons,
                        model=None, tagset: TagsetConfig = DEFAULT_TAGSET) -> Worksheet:
    """Build a worksheet from seed terms per level."""
    pools = build_exercise_pools(corpus, seeds, seed, config, lexicons, model, tagset)
    return build_worksheet(pools, target_level, seed)


def exercise_to_dict(ex: Exercise, include_answers: bool = True) -> dict:
    doc = {
        "id": ex.id,
        "mode": ex.mode,
        "level": ex.level,
        "seed": ex.seed,
        "word_bank": list(ex.word_bank),
        "bank_msd": ex.bank_msd,
        "items": [
            {"sentence_id": item.sentence_id, "gapped_text": item.gapped_text,
             "gap_index": item.gap_index}
            for item in ex.items
        ],
    }
    if include_answers:
        doc["answer_key"] = answer_key(ex)
    return doc


def answer_key(ex: Exercise) -> list[dict]:
    return [
        {"sentence_id": item.sentence_id, "answer_form": item.answer_form,
         "answer_lemma": item.answer_lemma, "gap_index": item.gap_index}
        for item in ex.items
    ]


def worksheet_to_dict(ws: Worksheet, include_answers: bool = True) -> dict:
    return {
        "target_level": ws.target_level,
        "seed": ws.seed,
        "level_mix": {lvl: ws.level_mix[lvl] for lvl in sorted(ws.level_mix)},
        "exercises": [exercise_to_dict(ex, include_answers) for ex in ws.exercises],
    }


def render_exercise_text(ex: Exercise) -> str:
    """Plain-text rendering: the bank, then the gapped sentences."""
    lines = [f"[{ex.id}] level {ex.level}, {ex.mode}"]
    lines.append("Word bank: " + "  ".join(ex.word_bank))
    for i, item in enumerate(ex.items, start=1):
        lines.append(f"{i}. {item.gapped_text}")
    return "\n".join(lines)
