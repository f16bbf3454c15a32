"""Word-bank exercise assembly: gap placement, bank invariants, distractor
rules, worksheet composition."""
import pytest

from helpers.build import sent
from sentpick.config import default_config
from sentpick.corpus import SearchQuery
from sentpick.exercises import (
    Exercise,
    ExerciseError,
    ExerciseItem,
    answer_key,
    build_exercise,
    build_worksheet,
    distractor_pool_from_corpus,
    exercise_to_dict,
    gap_token,
    render_exercise_text,
    worksheet_to_dict,
)
from sentpick.ranking import select_best_per_lemma

A1_NOUNS = ["hund", "katt", "bok", "stol", "bil", "blomma"]


@pytest.fixture(scope="module")
def a1_results(fixture_corpus, lexicons):
    config = default_config("permissive",
                            SearchQuery(term="x", target_level="A1"))
    best = select_best_per_lemma(fixture_corpus, A1_NOUNS, config, lexicons)
    return [best[lemma] for lemma in A1_NOUNS]


def test_gap_token_is_span_head():
    s = sent(
        ("Stora", "stor", "JJ", "JJ", "AT", 2),
        ("fiskar", "fisk", "NN", "NN", "SS", 3),
        ("simmar", "simma", "VB", "VB.PRS.AKT", "ROOT", 0),
        (".", ".", "MAD", "MAD", "IP", 3),
        spans=((1, 2),),
    )
    assert gap_token(s).form == "fiskar"  # its head lies outside the span
    single = sent(("Hej", "hej", "IN", "IN", "ROOT", 0), spans=((1, 1),))
    assert gap_token(single).form == "Hej"
    with pytest.raises(ExerciseError, match="no search-term match"):
        gap_token(sent(("Hej", "hej", "IN", "IN", "ROOT", 0)))


def test_build_same_msd_exercise(a1_results):
    ex = build_exercise(a1_results, "same_msd", "A1", rng_seed=7)
    assert len(ex.items) == 5
    assert len(ex.word_bank) == 6
    assert ex.bank_msd == "NN.UTR.SIN.IND.NOM"
    answers = {item.answer_form for item in ex.items}
    assert len(answers) == 5
    assert answers <= set(ex.word_bank)
    assert ex.distractor in ex.word_bank
    assert ex.distractor not in answers
    assert sorted(ex.word_bank) == sorted(list(answers) + [ex.distractor])


def test_gap_restores_original_sentence(a1_results):
    ex = build_exercise(a1_results, "same_msd", "A1", rng_seed=7)
    texts = {r.sentence_id: r.text for r in a1_results}
    for item in ex.items:
        restored = item.gapped_text.replace("___", item.answer_form, 1)
        assert restored == texts[item.sentence_id]
        assert item.gapped_text.split()[item.gap_index - 1] == "___"


def test_bank_deterministic_by_seed(a1_results):
    e1 = build_exercise(a1_results, "same_msd", "A1", rng_seed=42)
    e2 = build_exercise(a1_results, "same_msd", "A1", rng_seed=42)
    e3 = build_exercise(a1_results, "same_msd", "A1", rng_seed=43)
    assert e1.word_bank == e2.word_bank
    assert sorted(e1.word_bank) == sorted(e3.word_bank)


def test_mixed_pos_exercise(fixture_corpus, lexicons):
    lemmas = ["fisk", "hus", "kaffe", "stol", "blomma", "hund"]
    config = default_config("permissive", SearchQuery(term="x", target_level="A1"))
    best = select_best_per_lemma(fixture_corpus, lemmas, config, lexicons)
    results = [best[l] for l in lemmas]
    ex = build_exercise(results, "mixed_pos", "A1", rng_seed=1)
    assert len(ex.items) == 5
    assert ex.bank_msd is None
    # the leftovers supply the distractor in mixed mode
    assert ex.distractor in {"hund"}


def test_insufficient_candidates_error(a1_results):
    with pytest.raises(ExerciseError, match="found 4 of 5"):
        build_exercise(a1_results[:4], "same_msd", "A1", rng_seed=0)


def test_distractor_from_pool(a1_results, fixture_corpus, lexicons):
    pool = distractor_pool_from_corpus(fixture_corpus, lexicons, "A1")
    assert pool
    ex = build_exercise(a1_results[:5], "same_msd", "A1", rng_seed=3,
                        distractor_pool=pool)
    answer_lemmas = {i.answer_lemma for i in ex.items}
    picked = next(c for c in pool if c.form == ex.distractor)
    assert picked.lemma not in answer_lemmas
    assert picked.msd == ex.bank_msd


def test_manual_distractor_override(a1_results):
    ex = build_exercise(a1_results[:5], "same_msd", "A1", rng_seed=3,
                        manual_distractor="lampa")
    assert ex.distractor == "lampa"
    with pytest.raises(ExerciseError, match="equals an answer"):
        build_exercise(a1_results, "same_msd", "A1", rng_seed=3,
                       manual_distractor=a1_results[0].text.split()[3])


def test_no_viable_distractor(a1_results):
    # five items, no leftovers, no pool: nothing to build the bank from
    with pytest.raises(ExerciseError, match="no viable distractor"):
        build_exercise(a1_results[:5], "same_msd", "A1", rng_seed=0)


def mk_ex(level, mode, i):
    item = ExerciseItem(sentence_id=f"{level}-{i}", gapped_text="x ___ .",
                        answer_form="a", answer_lemma="a", gap_index=2)
    return Exercise(id=f"{level}-{mode}-{i}", mode=mode, level=level,
                    items=[item] * 5, word_bank=["a", "b"], distractor="b")


def pools_for(levels, per=5):
    return {
        lvl: {"same_msd": [mk_ex(lvl, "same_msd", i) for i in range(per)],
              "mixed_pos": [mk_ex(lvl, "mixed_pos", i) for i in range(per)]}
        for lvl in levels
    }


def test_worksheet_standard_mix():
    ws = build_worksheet(pools_for(["A1", "A2", "B1"]), "A2", seed=5)
    assert len(ws.exercises) == 9
    modes = [ex.mode for ex in ws.exercises]
    assert modes.count("same_msd") == 5
    assert modes.count("mixed_pos") == 4
    assert ws.level_mix == {"A1": 2, "A2": 5, "B1": 2}


def test_worksheet_a1_reduction():
    ws = build_worksheet(pools_for(["A1", "A2"]), "A1", seed=5)
    assert len(ws.exercises) == 7
    assert ws.level_mix == {"A1": 5, "A2": 2}
    modes = [ex.mode for ex in ws.exercises]
    assert modes.count("same_msd") == 4
    assert modes.count("mixed_pos") == 3


def test_worksheet_c1_reduction():
    ws = build_worksheet(pools_for(["B2", "C1"]), "C1", seed=5)
    assert len(ws.exercises) == 7
    assert ws.level_mix == {"B2": 2, "C1": 5}


def test_worksheet_shortage_names_level_and_mode():
    pools = pools_for(["A1", "A2", "B1"])
    pools["B1"]["mixed_pos"] = []
    with pytest.raises(ExerciseError, match="mixed_pos .* B1"):
        build_worksheet(pools, "A2", seed=1)


def test_worksheet_deterministic():
    w1 = build_worksheet(pools_for(["A1", "A2", "B1"]), "A2", seed=11)
    w2 = build_worksheet(pools_for(["A1", "A2", "B1"]), "A2", seed=11)
    assert [e.id for e in w1.exercises] == [e.id for e in w2.exercises]


def test_build_exercise_pools_from_seeds(fixture_corpus, lexicons):
    config = default_config("permissive", SearchQuery(term="x", target_level="A1"))
    seeds = {"A1": [{"terms": A1_NOUNS, "mode": "same_msd"},
                    {"terms": ["fisk", "hus", "kaffe", "stol", "blomma", "hund"],
                     "mode": "mixed_pos"}]}
    from sentpick.exercises import build_exercise_pools

    pools = build_exercise_pools(fixture_corpus, seeds, 11, config, lexicons)
    assert len(pools["A1"]["same_msd"]) == 1
    assert len(pools["A1"]["mixed_pos"]) == 1
    ex = pools["A1"]["same_msd"][0]
    assert ex.seed == 11 and len(ex.items) == 5
    assert pools["A1"]["mixed_pos"][0].seed == 12


def test_assemble_from_seeds_reports_shortage(fixture_corpus, lexicons):
    from sentpick.exercises import assemble_from_seeds

    config = default_config("permissive", SearchQuery(term="x", target_level="A1"))
    seeds = {"A1": [{"terms": A1_NOUNS, "mode": "same_msd"}]}
    with pytest.raises(ExerciseError, match="same_msd .* A1: need 3, have 1"):
        assemble_from_seeds(fixture_corpus, seeds, "A1", 0, config, lexicons)


def test_serialization_and_rendering(a1_results):
    ex = build_exercise(a1_results, "same_msd", "A1", rng_seed=2)
    doc = exercise_to_dict(ex, include_answers=False)
    assert "answer_key" not in doc
    assert [i["gapped_text"].count("___") for i in doc["items"]] == [1] * 5
    key = answer_key(ex)
    assert len(key) == 5 and all("answer_form" in k for k in key)
    text = render_exercise_text(ex)
    assert "Word bank:" in text and text.count("___") == 5
    ws = build_worksheet(pools_for(["A1", "A2"]), "A1", seed=0)
    wdoc = worksheet_to_dict(ws, include_answers=True)
    assert len(wdoc["exercises"]) == 7
