import json
from pathlib import Path

import pytest

from sentpick.config import (
    ConfigValidationError,
    config_json_schema,
    config_to_dict,
    config_to_json,
    criteria_catalog,
    default_config,
    resolved_params,
    validate_config,
)
from sentpick.corpus import SearchQuery
from sentpick.criteria import BINARY_IDS, CATALOG
from sentpick.ranking import SelectionError


def test_paper_eval_parameter_defaults():
    cfg = default_config("paper_eval")
    doc = config_to_dict(cfg)
    crit = doc["criteria"]
    assert crit["sent_length"]["params"] == {"min_len": 6, "max_len": 20}
    assert crit["non_alpha"]["params"]["max_nonalpha_ratio"] == 0.30
    assert crit["non_lemmatized"]["params"]["max_nonlemma_ratio"] == 0.30
    assert doc["query"]["max_candidates"] == 300
    assert crit["modal_verb"]["mode"] == "off"
    assert crit["term_position"]["mode"] == "off"


def test_paper_eval_modes():
    cfg = default_config("paper_eval")
    rankers = {cid for cid, c in cfg.criteria.items() if c.mode == "ranker"}
    assert rankers == {"typicality", "word_freq", "proper_name", "difficult_vocab"}
    filters = {cid for cid, c in cfg.criteria.items() if c.mode == "filter"}
    assert "l2_level" in filters and "sent_length" in filters
    assert len(filters) == 19


def test_permissive_all_off():
    cfg = default_config("permissive")
    assert all(c.mode == "off" for c in cfg.criteria.values())


def test_unknown_profile():
    with pytest.raises(SelectionError, match="unknown profile"):
        default_config("nope")


def test_default_profiles_validate():
    for profile in ("paper_eval", "dictionary_example", "permissive"):
        cfg = default_config(profile, SearchQuery(term="fisk"))
        doc = config_to_dict(cfg)
        revalidated = validate_config(doc)
        assert config_to_dict(revalidated) == doc


def test_projection_is_byte_stable_and_catalog_ordered():
    c1 = default_config("paper_eval", SearchQuery(term="fisk", target_level="A1"))
    c2 = default_config("paper_eval", SearchQuery(term="fisk", target_level="A1"))
    assert config_to_json(c1) == config_to_json(c2)
    doc = config_to_dict(c1)
    assert list(doc["criteria"]) == [spec.id for spec in CATALOG]


def test_validate_rejects_binary_ranker():
    doc = {"query": {"term": "fisk"},
           "criteria": {"interrogative": {"mode": "ranker"}}}
    with pytest.raises(ConfigValidationError) as err:
        validate_config(doc)
    assert any("binary" in e for e in err.value.errors)


def test_validate_lists_unknown_ids():
    doc = {"query": {"term": "fisk"}, "criteria": {"foo": {"mode": "filter"}}}
    with pytest.raises(ConfigValidationError) as err:
        validate_config(doc)
    assert any("foo" in e for e in err.value.errors)


def test_validate_collects_multiple_errors():
    doc = {
        "query": {"term": "", "target_level": "Z9"},
        "criteria": {
            "sent_length": {"mode": "filter", "params": {"min_len": "six"}},
            "bar": {},
        },
        "retain_suboptimal": "yes",
    }
    with pytest.raises(ConfigValidationError) as err:
        validate_config(doc)
    text = "\n".join(err.value.errors)
    assert "query.term" in text
    assert "target_level" in text
    assert "min_len" in text
    assert "bar" in text
    assert "retain_suboptimal" in text


def test_validate_valid_document():
    doc = {
        "query": {"term": "fisk", "match_kind": "lemma", "target_level": "A1",
                  "max_candidates": 50},
        "criteria": {
            "sent_length": {"mode": "filter", "params": {"min_len": 4, "max_len": 25}},
            "typicality": {"mode": "ranker"},
        },
        "retain_suboptimal": True,
    }
    cfg = validate_config(doc)
    assert cfg.query.max_candidates == 50
    assert cfg.criteria["sent_length"].params == {"min_len": 4, "max_len": 25}
    assert cfg.retain_suboptimal is True


def test_resolved_params_overlay():
    assert resolved_params("sent_length", {"min_len": 10}) == \
        {"min_len": 10, "max_len": 20}


def test_catalog_endpoint_shape():
    catalog = criteria_catalog()
    assert len(catalog) == 25
    by_id = {c["id"]: c for c in catalog}
    for cid in BINARY_IDS:
        assert by_id[cid]["modes"] == ["off", "filter"]
    assert by_id["typicality"]["modes"] == ["off", "filter", "ranker"]
    assert by_id["typicality"]["positive"] is True
    names = [p["name"] for p in by_id["sent_length"]["params"]]
    assert names == ["min_len", "max_len"]
    assert [c["number"] for c in catalog] == list(range(1, 26))


def test_shipped_schema_file_is_fresh():
    shipped = Path("src/sentpick/data/selection_config.schema.json")
    assert json.loads(shipped.read_text(encoding="utf-8")) == config_json_schema()
