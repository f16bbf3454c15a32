"""Sentence-level complexity features for the CEFR classifier.

61 numeric features over five groups: count, lexical, morphological,
syntactic and semantic. Incidence scores (IS) are raw counts normalized per
1,000 tokens; variational scores divide a category count by the number of
lexical tokens (noun/verb/adjective/adverb). Every ratio uses the 0/0 -> 0
convention (a zero denominator yields 0) so vectors stay finite.

Conventions that the names alone do not pin down:

* LIX is computed for the single sentence: word count (punctuation
  excluded) plus 100 * long-words/words, long meaning more than six
  characters.
* Type-token ratios run over case-folded surface forms of all tokens;
  bilog TTR is ln(types)/ln(tokens) and defined as 1.0 for a one-token
  sentence.
* Dependency arc length of a token is |index - head|; root tokens carry no
  arc. "Long arc" counts (length > 5) are reported as IS by default; pass
  long_arcs_as_incidence=False for raw counts.
* Graded-list lookups key on the lemma when present, otherwise the
  case-folded form. OOV counts tokens missing from the graded list
  (punctuation excluded); lemma-less tokens are counted separately.
* Difficult tokens are those graded above the target level; the N&V
  variant restricts that rule to nouns and verbs.
* Function words are non-punctuation tokens outside the four lexical
  categories. Lexical-to-non-lexical treats everything else, punctuation
  included, as non-lexical.
"""
from __future__ import annotations

import math

import numpy as np

from .corpus import AnnotatedSentence, Token
from .lexicons import Lexicons
from .levels import harder_than
from .tagset import DEFAULT_TAGSET, TagsetConfig

FEATURE_NAMES: tuple[str, ...] = (
    # count
    "sentence_length", "avg_token_length", "extra_long_tokens", "n_characters",
    "lix", "bilog_ttr", "root_ttr",
    # lexical
    "avg_kelly_log_freq", "a1_lemma_is", "a2_lemma_is", "b1_lemma_is",
    "b2_lemma_is", "c1_lemma_is", "c2_lemma_is", "difficult_w_is",
    "difficult_nv_is", "oov_is", "no_lemma_is",
    # morphological
    "modal_v_to_v", "particle_is", "pron3sg_is", "punct_is", "subjunction_is",
    "pr_to_n", "pr_to_pp", "sv_is", "sv_to_v", "adj_is", "adj_var", "adv_is",
    "adv_var", "n_is", "n_var", "v_is", "v_var", "function_w_is",
    "neuter_n_is", "cj_sj_is", "past_pc_to_v", "pres_pc_to_v", "past_v_to_v",
    "supine_v_to_v", "pres_v_to_v", "nominal_ratio", "n_to_v",
    "lex_to_nonlex", "lex_to_tokens", "rel_structure_is",
    # syntactic
    "avg_deparc_len", "deparc_gt5_is", "max_deparc_len", "right_arc_ratio",
    "left_arc_ratio", "modifier_var", "premod_is", "postmod_is", "subord_is",
    "relcl_is", "pp_compl_is",
    # semantic
    "avg_senses_per_token", "n_senses_per_n",
)

N_FEATURES = len(FEATURE_NAMES)

EXTRA_LONG_CHARS = 13
LIX_LONG_CHARS = 6
LONG_ARC_LEN = 5

FeatureVector = dict[str, float]


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def _key(token: Token) -> str:
    return token.lemma if token.lemma is not None else token.form.casefold()


def _is_sverb(t: Token, tagset: TagsetConfig) -> bool:
    if t.pos not in tagset.verb_tags:
        return False
    return tagset.msd_has(t.msd, tagset.sform_markers) or t.form.casefold().endswith("s")


def extract_features(sent: AnnotatedSentence, target_level: str, lexicons: Lexicons,
                     tagset: TagsetConfig = DEFAULT_TAGSET,
                     long_arcs_as_incidence: bool = True) -> FeatureVector:
    tokens = sent.tokens
    n = len(tokens)
    per_k = 1000.0 / n

    def incidence(count: float) -> float:
        return count * per_k

    fv: FeatureVector = {}

    # count group
    fv["sentence_length"] = float(n)
    fv["avg_token_length"] = sum(len(t.form) for t in tokens) / n
    fv["extra_long_tokens"] = float(sum(len(t.form) > EXTRA_LONG_CHARS for t in tokens))
    fv["n_characters"] = float(sum(len(t.form) for t in tokens))

    words = [t for t in tokens if t.pos not in tagset.punct_tags]
    long_words = sum(len(t.form) > LIX_LONG_CHARS for t in words)
    fv["lix"] = len(words) + 100.0 * _ratio(long_words, len(words)) if words else 0.0

    types = len({t.form.casefold() for t in tokens})
    fv["bilog_ttr"] = 1.0 if n == 1 else _ratio(math.log(types), math.log(n))
    fv["root_ttr"] = types / math.sqrt(n)

    # lexical group (graded-list based)
    kelly_freqs: list[float] = []
    level_counts = {lvl: 0 for lvl in ("A1", "A2", "B1", "B2", "C1", "C2")}
    difficult_w = difficult_nv = 0
    oov = 0
    nv_tags = tagset.noun_tags | tagset.verb_tags
    for t in tokens:
        if t.pos in tagset.punct_tags:
            continue
        entry = lexicons.kelly.entry(_key(t), t.pos)
        if entry is None:
            oov += 1
            continue
        kelly_freqs.append(entry.log_freq)
        if entry.level in level_counts:
            level_counts[entry.level] += 1
        if harder_than(entry.level, target_level):
            difficult_w += 1
            if t.pos in nv_tags:
                difficult_nv += 1
    fv["avg_kelly_log_freq"] = _ratio(sum(kelly_freqs), len(kelly_freqs))
    for lvl, count in level_counts.items():
        fv[f"{lvl.lower()}_lemma_is"] = incidence(count)
    fv["difficult_w_is"] = incidence(difficult_w)
    fv["difficult_nv_is"] = incidence(difficult_nv)
    fv["oov_is"] = incidence(oov)
    fv["no_lemma_is"] = incidence(sum(t.lemma is None for t in tokens))

    # morphological group
    def pos_count(tags: frozenset[str]) -> int:
        return sum(t.pos in tags for t in tokens)

    nouns = pos_count(tagset.noun_tags)
    verbs = pos_count(tagset.verb_tags)
    adjs = pos_count(tagset.adj_tags)
    advs = pos_count(tagset.adv_tags)
    pronouns = pos_count(tagset.pronoun_tags)
    preps = pos_count(tagset.prep_tags)
    participles = pos_count(tagset.participle_tags)
    punct = pos_count(tagset.punct_tags)
    lexical = nouns + verbs + adjs + advs

    modal_verbs = sum(
        t.pos in tagset.verb_tags and (t.lemma or t.form.casefold()) in tagset.modal_lemmas
        for t in tokens)
    fv["modal_v_to_v"] = _ratio(modal_verbs, verbs)
    fv["particle_is"] = incidence(pos_count(tagset.particle_tags))
    fv["pron3sg_is"] = incidence(sum(
        t.pos in tagset.pronoun_tags and _key(t) in tagset.third_sg_pronouns
        for t in tokens))
    fv["punct_is"] = incidence(punct)
    fv["subjunction_is"] = incidence(pos_count(tagset.subjunction_tags))
    fv["pr_to_n"] = _ratio(pronouns, nouns)
    fv["pr_to_pp"] = _ratio(pronouns, preps)

    sverbs = sum(_is_sverb(t, tagset) for t in tokens)
    fv["sv_is"] = incidence(sverbs)
    fv["sv_to_v"] = _ratio(sverbs, verbs)

    fv["adj_is"] = incidence(adjs)
    fv["adj_var"] = _ratio(adjs, lexical)
    fv["adv_is"] = incidence(advs)
    fv["adv_var"] = _ratio(advs, lexical)
    fv["n_is"] = incidence(nouns)
    fv["n_var"] = _ratio(nouns, lexical)
    fv["v_is"] = incidence(verbs)
    fv["v_var"] = _ratio(verbs, lexical)

    lexical_tags = tagset.lexical_tags()
    function_words = sum(
        t.pos not in lexical_tags and t.pos not in tagset.punct_tags for t in tokens)
    fv["function_w_is"] = incidence(function_words)
    fv["neuter_n_is"] = incidence(sum(
        t.pos in tagset.noun_tags and tagset.msd_has(t.msd, tagset.neuter_markers)
        for t in tokens))
    fv["cj_sj_is"] = incidence(pos_count(tagset.conj_tags) + pos_count(tagset.subjunction_tags))

    def participle_count(markers: frozenset[str]) -> int:
        return sum(t.pos in tagset.participle_tags and tagset.msd_has(t.msd, markers)
                   for t in tokens)

    def verb_form_count(markers: frozenset[str]) -> int:
        return sum(t.pos in tagset.verb_tags and tagset.msd_has(t.msd, markers)
                   for t in tokens)

    fv["past_pc_to_v"] = _ratio(participle_count(tagset.past_participle_markers), verbs)
    fv["pres_pc_to_v"] = _ratio(participle_count(tagset.pres_participle_markers), verbs)
    fv["past_v_to_v"] = _ratio(verb_form_count(tagset.past_tense_markers), verbs)
    fv["supine_v_to_v"] = _ratio(verb_form_count(tagset.supine_markers), verbs)
    fv["pres_v_to_v"] = _ratio(verb_form_count(tagset.pres_tense_markers), verbs)

    fv["nominal_ratio"] = _ratio(nouns + preps + participles, pronouns + advs + verbs)
    fv["n_to_v"] = _ratio(nouns, verbs)
    fv["lex_to_nonlex"] = _ratio(lexical, n - lexical)
    fv["lex_to_tokens"] = _ratio(lexical, n)
    fv["rel_structure_is"] = incidence(pos_count(tagset.relative_tags))

    # syntactic group
    arcs = [abs(t.index - t.head) for t in tokens if t.head > 0]
    fv["avg_deparc_len"] = _ratio(sum(arcs), len(arcs))
    long_arcs = sum(a > LONG_ARC_LEN for a in arcs)
    fv["deparc_gt5_is"] = incidence(long_arcs) if long_arcs_as_incidence else float(long_arcs)
    fv["max_deparc_len"] = float(max(arcs)) if arcs else 0.0
    right = sum(t.head > 0 and t.index > t.head for t in tokens)
    left = sum(t.head > 0 and t.index < t.head for t in tokens)
    fv["right_arc_ratio"] = _ratio(right, len(arcs))
    fv["left_arc_ratio"] = _ratio(left, len(arcs))

    premod = sum(t.head > 0 and t.deprel in tagset.modifier_deprels and t.index < t.head
                 for t in tokens)
    postmod = sum(t.head > 0 and t.deprel in tagset.modifier_deprels and t.index > t.head
                  for t in tokens)
    fv["modifier_var"] = _ratio(premod + postmod, lexical)
    fv["premod_is"] = incidence(premod)
    fv["postmod_is"] = incidence(postmod)

    finite = [t for t in tokens if tagset.is_finite_verb(t.pos, t.msd)]
    fv["subord_is"] = incidence(sum(
        t.head > 0 and t.deprel in tagset.subordinate_deprels for t in finite))
    fv["relcl_is"] = incidence(sum(
        t.head > 0 and t.deprel in tagset.relative_clause_deprels for t in finite))
    fv["pp_compl_is"] = incidence(sum(
        t.deprel in tagset.pp_complement_deprels for t in tokens))

    # semantic group
    senses = [lexicons.aux.senses(t.lemma) for t in tokens]
    fv["avg_senses_per_token"] = _ratio(sum(senses), n)
    noun_senses = [lexicons.aux.senses(t.lemma) for t in tokens if t.pos in tagset.noun_tags]
    fv["n_senses_per_n"] = _ratio(sum(noun_senses), len(noun_senses))

    return fv


def feature_array(fv: FeatureVector) -> np.ndarray:
    """Project a feature mapping onto the canonical order."""
    missing = [name for name in FEATURE_NAMES if name not in fv]
    if missing:
        raise ValueError(f"feature vector missing {missing}")
    return np.array([float(fv[name]) for name in FEATURE_NAMES], dtype=np.float64)


def validate_features(fv: FeatureVector) -> None:
    arr = feature_array(fv)
    if not np.all(np.isfinite(arr)):
        bad = [FEATURE_NAMES[i] for i in np.where(~np.isfinite(arr))[0]]
        raise ValueError(f"non-finite feature value(s): {bad}")
