"""Selection-config profiles, validation and the canonical JSON projection.

Three shipped profiles:

* paper_eval — the evaluation setup: most criteria filter, typicality and
  coursebook frequency rank positively, proper names and graded-list
  difficulty rank negatively; modal verbs and term position unrestricted;
  sentence length 6..20 tokens, non-alpha/non-lemma thresholds 0.30, at
  most 300 concordance candidates.
* dictionary_example — lexicographic flavor: term position restricted and
  proper names filtered, no level classification.
* permissive — everything off; the pipeline passes candidates through.

The JSON projection (`config_to_dict`) is fully resolved and emitted in
catalog order with fixed key order, so equal configs serialize to equal
bytes; clients that build requests from the criteria catalog reproduce it
exactly.
"""
from __future__ import annotations

import json
from typing import Any

from .corpus import MATCH_KINDS, CorpusError, SearchQuery
from .criteria import CATALOG, CATALOG_BY_ID
from .levels import CLASSIFIER_LEVELS
from .ranking import MODES, CriterionConfig, SelectionConfig, SelectionError

PROFILES = ("paper_eval", "dictionary_example", "permissive")

PLACEHOLDER_TERM = "<term>"

_PAPER_EVAL_RANKERS = {"typicality", "word_freq", "proper_name", "difficult_vocab"}
_PAPER_EVAL_OFF = {"modal_verb", "term_position"}

_DICT_EXAMPLE_RANKERS = {"typicality", "word_freq", "difficult_vocab"}
_DICT_EXAMPLE_OFF = {"l2_level", "modal_verb", "negation"}


def profile_modes(profile: str) -> dict[str, str]:
    """criterion id -> mode for a shipped profile (drives UI defaults)."""
    return _profile_modes(profile)


def _profile_modes(profile: str) -> dict[str, str]:
    modes = {}
    for spec in CATALOG:
        if profile == "permissive":
            modes[spec.id] = "off"
        elif profile == "paper_eval":
            if spec.id in _PAPER_EVAL_OFF:
                modes[spec.id] = "off"
            elif spec.id in _PAPER_EVAL_RANKERS:
                modes[spec.id] = "ranker"
            else:
                modes[spec.id] = "filter"
        elif profile == "dictionary_example":
            if spec.id in _DICT_EXAMPLE_OFF:
                modes[spec.id] = "off"
            elif spec.id in _DICT_EXAMPLE_RANKERS:
                modes[spec.id] = "ranker"
            else:
                modes[spec.id] = "filter"
        else:
            raise SelectionError(f"unknown profile {profile!r}")
    return modes


def default_config(profile: str, query: SearchQuery | None = None) -> SelectionConfig:
    """The shipped configuration for `profile`. When no query is given a
    placeholder term is used; replace it before selecting."""
    if profile not in PROFILES:
        raise SelectionError(f"unknown profile {profile!r}")
    if query is None:
        query = SearchQuery(term=PLACEHOLDER_TERM, match_kind="lemma",
                            target_level="B1", max_candidates=300)
    criteria = {
        spec.id: CriterionConfig(id=spec.id, mode=mode, params={})
        for spec, mode in ((s, _profile_modes(profile)[s.id]) for s in CATALOG)
    }
    return SelectionConfig(query=query, criteria=criteria, retain_suboptimal=False)


def resolved_params(cid: str, overrides: dict) -> dict:
    """Catalog defaults overlaid with per-config overrides, catalog key order."""
    spec = CATALOG_BY_ID[cid]
    return {name: overrides.get(name, default) for name, default in spec.params.items()}


def config_to_dict(config: SelectionConfig) -> dict:
    """Fully-resolved canonical projection (stable key order)."""
    return {
        "query": {
            "term": config.query.term,
            "match_kind": config.query.match_kind,
            "pos": config.query.pos,
            "target_level": config.query.target_level,
            "max_candidates": config.query.max_candidates,
        },
        "retain_suboptimal": config.retain_suboptimal,
        "criteria": {
            spec.id: {
                "mode": config.criteria[spec.id].mode if spec.id in config.criteria else "off",
                "params": resolved_params(
                    spec.id,
                    config.criteria[spec.id].params if spec.id in config.criteria else {}),
            }
            for spec in CATALOG
        },
    }


def config_to_json(config: SelectionConfig) -> str:
    """Compact byte-stable serialization of the canonical projection."""
    return json.dumps(config_to_dict(config), ensure_ascii=False,
                      separators=(",", ":"))


def _check_params(cid: str, raw: Any, errors: list[str]) -> dict:
    spec = CATALOG_BY_ID[cid]
    if not isinstance(raw, dict):
        errors.append(f"{cid}: params must be an object")
        return {}
    params = {}
    for name, value in raw.items():
        if name not in spec.params:
            errors.append(f"{cid}: unknown parameter {name!r}")
            continue
        default = spec.params[name]
        if isinstance(default, bool):
            ok = isinstance(value, bool)
        elif isinstance(default, (int, float)):
            ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        elif isinstance(default, list):
            ok = isinstance(value, list)
        else:
            ok = True
        if not ok:
            errors.append(f"{cid}: parameter {name!r} has wrong type")
            continue
        params[name] = value
    return params


def validate_config(doc: dict) -> SelectionConfig:
    """Validate a config document; raises ConfigValidationError carrying
    every problem found, not just the first."""
    errors: list[str] = []
    query = None
    q = doc.get("query")
    if not isinstance(q, dict):
        errors.append("query: required object")
    else:
        term = q.get("term", "")
        match_kind = q.get("match_kind", "lemma")
        target_level = q.get("target_level", "B1")
        max_candidates = q.get("max_candidates", 300)
        if not isinstance(term, str) or not term:
            errors.append("query.term: non-empty string required")
        if match_kind not in MATCH_KINDS:
            errors.append(f"query.match_kind: must be one of {list(MATCH_KINDS)}")
        if target_level not in CLASSIFIER_LEVELS:
            errors.append(f"query.target_level: must be one of {list(CLASSIFIER_LEVELS)}")
        if not isinstance(max_candidates, int) or max_candidates < 1:
            errors.append("query.max_candidates: positive integer required")
        if not errors:
            try:
                query = SearchQuery(term=term, match_kind=match_kind,
                                    pos=q.get("pos"), target_level=target_level,
                                    max_candidates=max_candidates)
            except CorpusError as exc:
                errors.append(f"query: {exc}")

    criteria: dict[str, CriterionConfig] = {}
    raw_criteria = doc.get("criteria", {})
    if not isinstance(raw_criteria, dict):
        errors.append("criteria: must be an object keyed by criterion id")
        raw_criteria = {}
    unknown = [cid for cid in raw_criteria if cid not in CATALOG_BY_ID]
    if unknown:
        errors.append(f"unknown criterion id(s): {sorted(unknown)}")
    for cid, entry in raw_criteria.items():
        if cid not in CATALOG_BY_ID:
            continue
        if not isinstance(entry, dict):
            errors.append(f"{cid}: must be an object")
            continue
        mode = entry.get("mode", "off")
        if mode not in MODES:
            errors.append(f"{cid}: mode must be one of {list(MODES)}")
            continue
        if mode == "ranker" and CATALOG_BY_ID[cid].binary:
            errors.append(f"{cid}: binary criterion cannot be a ranker")
            continue
        params = _check_params(cid, entry.get("params", {}), errors)
        criteria[cid] = CriterionConfig(id=cid, mode=mode, params=params)

    retain = doc.get("retain_suboptimal", False)
    if not isinstance(retain, bool):
        errors.append("retain_suboptimal: boolean required")
        retain = False

    if errors:
        raise ConfigValidationError(errors)
    assert query is not None
    return SelectionConfig(query=query, criteria=criteria, retain_suboptimal=retain)


class ConfigValidationError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


def criteria_catalog() -> list[dict]:
    """Machine-readable criterion catalog (drives the service and any UI)."""
    out = []
    for spec in CATALOG:
        out.append({
            "id": spec.id,
            "number": spec.number,
            "group": spec.group,
            "binary": spec.binary,
            "positive": spec.positive,
            "modes": ["off", "filter"] if spec.binary else ["off", "filter", "ranker"],
            "params": [
                {"name": name, "default": default,
                 "type": ("boolean" if isinstance(default, bool)
                          else "number" if isinstance(default, (int, float))
                          else "array")}
                for name, default in spec.params.items()
            ],
            "description": spec.description,
        })
    return out


def config_json_schema() -> dict:
    """JSON Schema for config documents (shipped at data/selection_config.schema.json)."""
    criterion_props = {}
    for spec in CATALOG:
        param_props = {}
        for name, default in spec.params.items():
            if isinstance(default, bool):
                ptype: dict = {"type": "boolean"}
            elif isinstance(default, (int, float)):
                ptype = {"type": "number"}
            else:
                ptype = {"type": "array", "items": {"type": "string"}}
            param_props[name] = {**ptype, "default": default}
        criterion_props[spec.id] = {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["off", "filter"] if spec.binary
                         else ["off", "filter", "ranker"]},
                "params": {"type": "object", "additionalProperties": False,
                           "properties": param_props},
            },
        }
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "title": "sentpick selection config",
        "type": "object",
        "additionalProperties": False,
        "required": ["query"],
        "properties": {
            "query": {
                "type": "object",
                "additionalProperties": False,
                "required": ["term"],
                "properties": {
                    "term": {"type": "string", "minLength": 1},
                    "match_kind": {"enum": list(MATCH_KINDS)},
                    "pos": {"type": ["string", "null"]},
                    "target_level": {"enum": list(CLASSIFIER_LEVELS)},
                    "max_candidates": {"type": "integer", "minimum": 1},
                },
            },
            "retain_suboptimal": {"type": "boolean"},
            "criteria": {
                "type": "object",
                "additionalProperties": False,
                "properties": criterion_props,
            },
        },
    }
