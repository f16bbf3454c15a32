"""Tag-category configuration.

Criteria and complexity features are written against tag *categories*
(noun, finite verb, negation adverbial, verb group ...); the concrete tag
strings live here so a different tagger/parser output only needs a new
config, not new code. The shipped default targets the SUC POS tagset and
Mamba-style dependency labels common in Swedish corpus exports; an
alternative profile for Universal Dependencies ships as data/tagset_ud.json.

Morphology is matched by case-insensitive substring against the MSD column
(e.g. marker "INF" hits "INF.AKT" as well as "VerbForm=Inf").
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields


def _set(*items: str) -> frozenset[str]:
    return frozenset(items)


@dataclass(frozen=True)
class TagsetConfig:
    # POS categories
    noun_tags: frozenset[str] = _set("NN")
    verb_tags: frozenset[str] = _set("VB")
    adj_tags: frozenset[str] = _set("JJ")
    adv_tags: frozenset[str] = _set("AB")
    proper_tags: frozenset[str] = _set("PM")
    abbrev_tags: frozenset[str] = _set("AN")
    pronoun_tags: frozenset[str] = _set("PN")
    prep_tags: frozenset[str] = _set("PP")
    participle_tags: frozenset[str] = _set("PC")
    conj_tags: frozenset[str] = _set("KN")
    subjunction_tags: frozenset[str] = _set("SN")
    interjection_tags: frozenset[str] = _set("IN")
    particle_tags: frozenset[str] = _set("PL")
    relative_tags: frozenset[str] = _set("HA", "HD", "HP", "HS")
    punct_tags: frozenset[str] = _set("MAD", "MID", "PAD")
    minor_delim_tags: frozenset[str] = _set("MID")
    pair_delim_tags: frozenset[str] = _set("PAD")

    # MSD markers (substring match, case-insensitive)
    nonfinite_markers: frozenset[str] = _set("INF", "SUP")
    past_participle_markers: frozenset[str] = _set("PRF")
    pres_participle_markers: frozenset[str] = _set("PRS")
    past_tense_markers: frozenset[str] = _set("PRT")
    pres_tense_markers: frozenset[str] = _set("PRS")
    supine_markers: frozenset[str] = _set("SUP")
    sform_markers: frozenset[str] = _set("SFO")
    neuter_markers: frozenset[str] = _set("NEU")

    # dependency relation categories
    subject_deprels: frozenset[str] = _set("SS", "ES", "FS")
    expletive_deprels: frozenset[str] = _set("FS", "ES")
    object_deprels: frozenset[str] = _set("OO", "IO")
    attribute_deprels: frozenset[str] = _set("AT", "ET")
    negation_deprels: frozenset[str] = _set("NA")
    verb_group_deprels: frozenset[str] = _set("VG")
    modifier_deprels: frozenset[str] = _set("AT", "ET")
    # deprels under which a finite verb counts as heading its own clause
    clausal_deprels: frozenset[str] = _set(
        "MS", "+F", "CJ", "OO", "OA", "SS", "ES", "AA", "TA", "CA", "UA", "EF", "ET"
    )
    # subset of the above that marks embedded (non-coordinated) clauses
    subordinate_deprels: frozenset[str] = _set(
        "OO", "OA", "SS", "ES", "AA", "TA", "CA", "UA", "EF", "ET"
    )
    relative_clause_deprels: frozenset[str] = _set("EF", "ET")
    pp_complement_deprels: frozenset[str] = _set("PA")

    # lemma sets for surface-heuristic criteria
    anaphoric_pronouns: frozenset[str] = _set(
        "den", "det", "denna", "denne", "detta", "dessa", "sådan", "sådant", "sådana"
    )
    third_sg_pronouns: frozenset[str] = _set("han", "hon", "den", "det")
    modal_lemmas: frozenset[str] = _set("kunna", "måste", "skola", "böra", "vilja", "få")
    auxiliary_lemmas: frozenset[str] = _set("ha", "vara", "komma", "bli")
    relative_introducer_forms: frozenset[str] = _set("som")

    def lexical_tags(self) -> frozenset[str]:
        return self.noun_tags | self.verb_tags | self.adj_tags | self.adv_tags

    def msd_has(self, msd: str, markers: frozenset[str]) -> bool:
        low = msd.casefold()
        return any(m.casefold() in low for m in markers)

    def is_finite_verb(self, pos: str, msd: str) -> bool:
        return pos in self.verb_tags and not self.msd_has(msd, self.nonfinite_markers)

    @classmethod
    def from_json(cls, path: str) -> "TagsetConfig":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown tagset fields: {sorted(unknown)}")
        return cls(**{k: frozenset(v) for k, v in raw.items()})


DEFAULT_TAGSET = TagsetConfig()
