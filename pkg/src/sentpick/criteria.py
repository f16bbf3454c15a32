"""Rule-based sentence selection criteria.

Twenty-four of the twenty-five catalogued criteria are surface/parse
heuristics implemented here as pure functions over an annotated sentence;
the remaining one (`l2_level`) is the trained classifier in
:mod:`sentpick.classifier` and is wired in by the ranking engine.

Each criterion yields a :class:`CriterionValue`: a numeric value, the token
indices that produced it, and a `triggered` flag saying whether the value
would exclude the sentence if the criterion ran in filter mode. Binary
criteria (value always 0/1) can only ever filter; the rest may also rank.
`typicality` and `word_freq` are the only criteria whose value correlates
positively with suitability; every other ranker counts badness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .corpus import AnnotatedSentence, SearchQuery, Token
from .lexicons import AuxLists, Lexicons
from .levels import harder_than
from .tagset import TagsetConfig

Params = Mapping[str, Mapping[str, Any]]


@dataclass(frozen=True, slots=True)
class CriterionValue:
    id: str
    value: float
    triggered: bool
    evidence: tuple[int, ...] = ()


@dataclass(frozen=True)
class CriterionSpec:
    """Catalog metadata for one criterion: stable id, its position in the
    published table, whether it is binary (filter-only), whether a high
    value is good (positive ranker), and its numeric parameters."""
    id: str
    number: int
    group: str
    binary: bool = False
    positive: bool = False
    params: dict[str, Any] = field(default_factory=dict)
    description: str = ""


CATALOG: tuple[CriterionSpec, ...] = (
    CriterionSpec("search_absence", 1, "search_term", binary=True,
                  description="search term missing from the sentence"),
    CriterionSpec("match_count", 2, "search_term",
                  params={"max_matches": 1},
                  description="repeated matches of the search term"),
    CriterionSpec("term_position", 3, "search_term", binary=True,
                  params={"forbid_first": True, "forbid_last": True},
                  description="search term at a forbidden sentence edge"),
    CriterionSpec("dep_root", 4, "well_formedness", binary=True,
                  description="no dependency root in the parse"),
    CriterionSpec("ellipsis", 5, "well_formedness",
                  description="no subject or no finite verb"),
    CriterionSpec("incompleteness", 6, "well_formedness", binary=True,
                  params={"final_punct": [".", "!", "?"]},
                  description="missing initial capital or final punctuation"),
    CriterionSpec("non_lemmatized", 7, "well_formedness",
                  params={"max_nonlemma_ratio": 0.30},
                  description="share of tokens without a dictionary form"),
    CriterionSpec("non_alpha", 8, "well_formedness",
                  params={"max_nonalpha_ratio": 0.30},
                  description="share of tokens without alphabetic characters"),
    CriterionSpec("struct_connective", 9, "context_independence", binary=True,
                  description="sentence-initial conjunction/subjunction in a "
                              "single-clause sentence"),
    CriterionSpec("pron_anaphora", 10, "context_independence",
                  params={"max_allowed": 0},
                  description="anaphoric third-person/demonstrative pronouns"),
    CriterionSpec("adv_anaphora", 11, "context_independence",
                  params={"max_allowed": 0},
                  description="anaphoric time/place/discourse adverbs"),
    CriterionSpec("l2_level", 12, "l2_complexity",
                  params={"max_distance": 0},
                  description="CEFR level distance between classifier and target"),
    CriterionSpec("negation", 13, "structural",
                  params={"max_allowed": 0},
                  description="negation adverbials"),
    CriterionSpec("interrogative", 14, "structural", binary=True,
                  description="direct question ending in a question mark"),
    CriterionSpec("direct_speech", 15, "structural", binary=True,
                  description="delimiter + speaking verb + pronoun/name pattern"),
    CriterionSpec("closed_answer", 16, "structural", binary=True,
                  description="sentence-initial yes/no style answer"),
    CriterionSpec("modal_verb", 17, "structural",
                  params={"max_allowed": 0},
                  description="modal verbs in auxiliary (verb group) use"),
    CriterionSpec("sent_length", 18, "structural",
                  params={"min_len": 6, "max_len": 20},
                  description="token count outside the configured range"),
    CriterionSpec("difficult_vocab", 19, "lexical",
                  params={"max_allowed": 0},
                  description="content lemmas graded above the target level"),
    CriterionSpec("word_freq", 20, "lexical", positive=True,
                  params={"min_freq": 0},
                  description="mean coursebook frequency at the target level"),
    CriterionSpec("oov", 21, "lexical",
                  params={"max_allowed": 0},
                  description="content lemmas missing from the coursebook list"),
    CriterionSpec("sensitive", 22, "lexical",
                  params={"max_allowed": 0, "topics": []},
                  description="lemmas on the sensitive-vocabulary list"),
    CriterionSpec("typicality", 23, "lexical", positive=True,
                  params={"min_score": 0},
                  description="summed collocation strength of dependency pairs"),
    CriterionSpec("proper_name", 24, "lexical",
                  params={"max_allowed": 0},
                  description="proper-noun tokens"),
    CriterionSpec("abbreviation", 25, "lexical",
                  params={"max_allowed": 0},
                  description="abbreviation tokens"),
)

CATALOG_BY_ID: dict[str, CriterionSpec] = {spec.id: spec for spec in CATALOG}
BINARY_IDS: frozenset[str] = frozenset(s.id for s in CATALOG if s.binary)
POSITIVE_IDS: frozenset[str] = frozenset(s.id for s in CATALOG if s.positive)
RULE_BASED_IDS: tuple[str, ...] = tuple(s.id for s in CATALOG if s.id != "l2_level")


def _param(params: Params, cid: str, name: str):
    override = params.get(cid, {})
    if name in override:
        return override[name]
    return CATALOG_BY_ID[cid].params[name]


def _lookup_key(token: Token) -> str | None:
    """Lemma when available, case-folded form otherwise."""
    if token.lemma is not None:
        return token.lemma
    return token.form.casefold()


def _has_alpha(form: str) -> bool:
    return any(ch.isalpha() for ch in form)


def _count_value(cid: str, hits: list[int], max_allowed: int) -> CriterionValue:
    return CriterionValue(cid, float(len(hits)), len(hits) > max_allowed, tuple(hits))


# --- search term (criteria 1-3) -------------------------------------------

def eval_search_term(sent: AnnotatedSentence, query: SearchQuery,
                     params: Params, tagset: TagsetConfig) -> list[CriterionValue]:
    spans = sent.match_spans
    absent = CriterionValue("search_absence", float(not spans), not spans)

    extra_tokens = [i for (a, b) in spans[1:] for i in range(a, b + 1)]
    matches = CriterionValue(
        "match_count",
        float(max(0, len(spans) - 1)),
        len(spans) > int(_param(params, "match_count", "max_matches")),
        tuple(extra_tokens),
    )

    last_np = 0
    for t in sent.tokens:
        if t.pos not in tagset.punct_tags:
            last_np = t.index
    forbid_first = bool(_param(params, "term_position", "forbid_first"))
    forbid_last = bool(_param(params, "term_position", "forbid_last"))
    bad: list[int] = []
    for a, b in spans:
        if (forbid_first and a == 1) or (forbid_last and last_np and b == last_np):
            bad.extend(range(a, b + 1))
    position = CriterionValue("term_position", float(bool(bad)), bool(bad), tuple(bad))
    return [absent, matches, position]


# --- well-formedness (criteria 4-8) ----------------------------------------

def eval_wellformedness(sent: AnnotatedSentence, params: Params,
                        tagset: TagsetConfig) -> list[CriterionValue]:
    tokens = sent.tokens
    n = len(tokens)

    has_root = any(t.head == 0 for t in tokens)
    root = CriterionValue("dep_root", float(not has_root), not has_root)

    has_subject = any(t.deprel in tagset.subject_deprels for t in tokens)
    has_finite = any(tagset.is_finite_verb(t.pos, t.msd) for t in tokens)
    elliptic = not has_subject or not has_finite
    ellipsis = CriterionValue("ellipsis", float(elliptic), elliptic)

    evidence: list[int] = []
    first_alpha = next((t for t in tokens if _has_alpha(t.form)), None)
    if first_alpha is None:
        evidence.append(1)
    else:
        ch = next(c for c in first_alpha.form if c.isalpha())
        if not ch.isupper():
            evidence.append(first_alpha.index)
    final_punct = set(_param(params, "incompleteness", "final_punct"))
    if tokens[-1].form not in final_punct:
        evidence.append(n)
    incomplete = CriterionValue("incompleteness", float(bool(evidence)),
                                bool(evidence), tuple(evidence))

    lemmaless = [t.index for t in tokens if t.lemma is None]
    ratio = len(lemmaless) / n
    non_lemma = CriterionValue(
        "non_lemmatized", ratio,
        ratio > float(_param(params, "non_lemmatized", "max_nonlemma_ratio")),
        tuple(lemmaless))

    symbolic = [t.index for t in tokens if not _has_alpha(t.form)]
    ratio = len(symbolic) / n
    non_alpha = CriterionValue(
        "non_alpha", ratio,
        ratio > float(_param(params, "non_alpha", "max_nonalpha_ratio")),
        tuple(symbolic))

    return [root, ellipsis, incomplete, non_lemma, non_alpha]


# --- context independence (criteria 9-11) -----------------------------------

def count_clauses(sent: AnnotatedSentence, tagset: TagsetConfig) -> int:
    """Finite verbs that are the root or attach through a clausal relation;
    the cheapest parse-derived stand-in for a clause count."""
    count = 0
    for t in sent.tokens:
        if not tagset.is_finite_verb(t.pos, t.msd):
            continue
        if t.head == 0 or t.deprel in tagset.clausal_deprels:
            count += 1
    return count


def _opens_completed_pair(sent: AnnotatedSentence, aux: AuxLists) -> bool:
    first = sent.tokens[0]
    opener_keys = {first.form.casefold()}
    if first.lemma:
        opener_keys.add(first.lemma)
    for opener, closer in aux.paired_conjunctions:
        if opener not in opener_keys:
            continue
        for t in sent.tokens[1:]:
            if t.form.casefold() == closer or t.lemma == closer:
                return True
    return False


def eval_context_independence(sent: AnnotatedSentence, params: Params,
                              tagset: TagsetConfig, aux: AuxLists) -> list[CriterionValue]:
    tokens = sent.tokens
    first = tokens[0]

    # initial connective is suspect unless the sentence has more than one
    # clause or the connective opens a paired conjunction completed later
    connective = (first.pos in tagset.conj_tags or first.pos in tagset.subjunction_tags)
    isolated = (
        connective
        and count_clauses(sent, tagset) <= 1
        and not _opens_completed_pair(sent, aux)
    )
    struct = CriterionValue("struct_connective", float(isolated), isolated,
                            (1,) if isolated else ())

    pron_hits: list[int] = []
    for t in tokens:
        if t.pos not in tagset.pronoun_tags:
            continue
        key = _lookup_key(t)
        if key not in tagset.anaphoric_pronouns and t.form.casefold() not in tagset.anaphoric_pronouns:
            continue
        if t.deprel in tagset.expletive_deprels:
            continue
        nxt = tokens[t.index] if t.index < len(tokens) else None
        if nxt is not None and (
            nxt.form.casefold() in tagset.relative_introducer_forms
            or (nxt.lemma or "") in tagset.relative_introducer_forms
        ):
            continue
        pron_hits.append(t.index)
    pron = _count_value("pron_anaphora", pron_hits,
                        int(_param(params, "pron_anaphora", "max_allowed")))

    adv_hits = [
        t.index for t in tokens
        if t.pos in tagset.adv_tags and _lookup_key(t) in aux.anaphoric_adverbs
    ]
    adv = _count_value("adv_anaphora", adv_hits,
                       int(_param(params, "adv_anaphora", "max_allowed")))

    return [struct, pron, adv]


# --- additional structural criteria (13-18) ---------------------------------

def _match_direct_speech(sent: AnnotatedSentence, tagset: TagsetConfig,
                         aux: AuxLists) -> tuple[int, ...]:
    """Delimiter (minor or pairwise), optional auxiliary verbs, a speaking
    verb, then a pronoun or proper name. Returns the matched token indices,
    empty when the pattern is absent."""
    tokens = sent.tokens
    n = len(tokens)
    delim_tags = tagset.minor_delim_tags | tagset.pair_delim_tags
    for i, t in enumerate(tokens):
        if t.pos not in delim_tags:
            continue
        j = i + 1
        while j < n and tokens[j].pos in tagset.verb_tags and \
                (tokens[j].lemma or tokens[j].form.casefold()) in tagset.auxiliary_lemmas:
            j += 1
        if j >= n or tokens[j].pos not in tagset.verb_tags:
            continue
        if (tokens[j].lemma or tokens[j].form.casefold()) not in aux.speaking_verbs:
            continue
        k = j + 1
        if k < n and (tokens[k].pos in tagset.pronoun_tags or tokens[k].pos in tagset.proper_tags):
            return tuple(range(i + 1, k + 2))
    return ()


def _match_closed_answer(sent: AnnotatedSentence, tagset: TagsetConfig) -> tuple[int, ...]:
    tokens = sent.tokens
    # interjection may open the sentence without a leading delimiter
    if tokens[0].pos in tagset.interjection_tags:
        if len(tokens) > 1 and tokens[1].pos in tagset.minor_delim_tags:
            return (1, 2)
    if tokens[0].pos in tagset.minor_delim_tags and len(tokens) > 2:
        middle, closing = tokens[1], tokens[2]
        if (middle.pos in tagset.adv_tags or middle.pos in tagset.interjection_tags) \
                and closing.pos in tagset.minor_delim_tags:
            return (1, 2, 3)
    return ()


def eval_structural(sent: AnnotatedSentence, params: Params,
                    tagset: TagsetConfig, aux: AuxLists) -> list[CriterionValue]:
    tokens = sent.tokens

    neg_hits = [t.index for t in tokens if t.deprel in tagset.negation_deprels]
    negation = _count_value("negation", neg_hits,
                            int(_param(params, "negation", "max_allowed")))

    is_question = tokens[-1].form == "?"
    interrogative = CriterionValue("interrogative", float(is_question), is_question,
                                   (len(tokens),) if is_question else ())

    speech_ev = _match_direct_speech(sent, tagset, aux)
    direct_speech = CriterionValue("direct_speech", float(bool(speech_ev)),
                                   bool(speech_ev), speech_ev)

    answer_ev = _match_closed_answer(sent, tagset)
    closed_answer = CriterionValue("closed_answer", float(bool(answer_ev)),
                                   bool(answer_ev), answer_ev)

    # a modal lemma counts only in auxiliary use: it heads a verb group
    # (has a VG-style dependent) or sits inside one (carries the VG deprel)
    heads_with_vg = {t.head for t in tokens
                     if t.head > 0 and t.deprel in tagset.verb_group_deprels}
    modal_hits = []
    for t in tokens:
        if t.pos not in tagset.verb_tags:
            continue
        if (t.lemma or t.form.casefold()) not in tagset.modal_lemmas:
            continue
        if t.index in heads_with_vg or t.deprel in tagset.verb_group_deprels:
            modal_hits.append(t.index)
    modal = _count_value("modal_verb", modal_hits,
                         int(_param(params, "modal_verb", "max_allowed")))

    n = len(tokens)
    out_of_range = n < int(_param(params, "sent_length", "min_len")) or \
        n > int(_param(params, "sent_length", "max_len"))
    length = CriterionValue("sent_length", float(n), out_of_range)

    return [negation, interrogative, direct_speech, closed_answer, modal, length]


# --- additional lexical criteria (19-25) -------------------------------------

def collocation_pairs(sent: AnnotatedSentence,
                      tagset: TagsetConfig) -> list[tuple[str, str, str, int, int]]:
    """(head_lemma, relation, dep_lemma, head_index, dep_index) for every
    verb-subject, verb-object and noun-attribute arc with both lemmas known."""
    pairs = []
    for t in sent.tokens:
        if t.head == 0 or t.lemma is None:
            continue
        head = sent.token_at(t.head)
        if head.lemma is None:
            continue
        if t.pos in tagset.noun_tags and head.pos in tagset.verb_tags:
            if t.deprel in tagset.subject_deprels:
                pairs.append((head.lemma, "subj", t.lemma, head.index, t.index))
            elif t.deprel in tagset.object_deprels:
                pairs.append((head.lemma, "obj", t.lemma, head.index, t.index))
        if t.deprel in tagset.attribute_deprels and head.pos in tagset.noun_tags:
            pairs.append((head.lemma, "attr", t.lemma, head.index, t.index))
    return pairs


def eval_lexical(sent: AnnotatedSentence, query: SearchQuery, params: Params,
                 tagset: TagsetConfig, lexicons: Lexicons) -> list[CriterionValue]:
    tokens = sent.tokens
    target = query.target_level
    content = [t for t in tokens if t.pos in tagset.lexical_tags()]

    difficult_hits = []
    for t in content:
        if t.lemma is None:
            continue
        level = lexicons.kelly.level(t.lemma, t.pos)
        if level is not None and harder_than(level, target):
            difficult_hits.append(t.index)
    difficult = _count_value("difficult_vocab", difficult_hits,
                             int(_param(params, "difficult_vocab", "max_allowed")))

    freqs: list[float] = []
    freq_ev: list[int] = []
    oov_hits: list[int] = []
    for t in content:
        if t.lemma is None:
            continue
        entry = lexicons.svalex.entry(t.lemma, t.pos)
        if entry is None:
            oov_hits.append(t.index)
        else:
            freqs.append(entry.freq_per_level.get(target, 0.0))
            freq_ev.append(t.index)
    mean_freq = sum(freqs) / len(freqs) if freqs else 0.0
    word_freq = CriterionValue(
        "word_freq", mean_freq,
        mean_freq < float(_param(params, "word_freq", "min_freq")),
        tuple(freq_ev))
    oov = _count_value("oov", oov_hits, int(_param(params, "oov", "max_allowed")))

    topics = set(_param(params, "sensitive", "topics"))
    sensitive_hits = []
    for t in tokens:
        key = _lookup_key(t)
        topic = lexicons.aux.sensitive.get(key) if key else None
        if topic is None:
            continue
        if topics and topic not in topics:
            continue
        sensitive_hits.append(t.index)
    sensitive = _count_value("sensitive", sensitive_hits,
                             int(_param(params, "sensitive", "max_allowed")))

    total = 0.0
    typ_ev: set[int] = set()
    for head_lemma, relation, dep_lemma, head_idx, dep_idx in collocation_pairs(sent, tagset):
        score = lexicons.lmi.score(head_lemma, relation, dep_lemma)
        if score is not None:
            total += score
            typ_ev.update((head_idx, dep_idx))
    typicality = CriterionValue(
        "typicality", total,
        total < float(_param(params, "typicality", "min_score")),
        tuple(sorted(typ_ev)))

    proper_hits = [t.index for t in tokens if t.pos in tagset.proper_tags]
    proper = _count_value("proper_name", proper_hits,
                          int(_param(params, "proper_name", "max_allowed")))

    abbrev_hits = [t.index for t in tokens if t.pos in tagset.abbrev_tags]
    abbrev = _count_value("abbreviation", abbrev_hits,
                          int(_param(params, "abbreviation", "max_allowed")))

    return [difficult, word_freq, oov, sensitive, typicality, proper, abbrev]


def eval_rule_based(sent: AnnotatedSentence, query: SearchQuery, params: Params,
                    tagset: TagsetConfig, lexicons: Lexicons) -> list[CriterionValue]:
    """All 24 rule-based criteria in catalog order."""
    values = (
        eval_search_term(sent, query, params, tagset)
        + eval_wellformedness(sent, params, tagset)
        + eval_context_independence(sent, params, tagset, lexicons.aux)
        + eval_structural(sent, params, tagset, lexicons.aux)
        + eval_lexical(sent, query, params, tagset, lexicons)
    )
    order = {cid: i for i, cid in enumerate(RULE_BASED_IDS)}
    values.sort(key=lambda v: order[v.id])
    return values
