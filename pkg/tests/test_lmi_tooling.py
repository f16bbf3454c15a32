"""The collocation-table builder used for fixtures, checked against hand
arithmetic on a tiny corpus."""
import math

import pytest

from helpers.build import sent
from helpers.build_lmi import extract_pairs, lmi_scores


def test_pair_extraction():
    s = sent(
        ("Katten", "katt", "NN", "NN", "SS", 2),
        ("äter", "äta", "VB", "VB.PRS.AKT", "ROOT", 0),
        ("stor", "stor", "JJ", "JJ", "AT", 4),
        ("fisk", "fisk", "NN", "NN", "OO", 2),
        (".", ".", "MAD", "MAD", "IP", 2),
    )
    assert sorted(extract_pairs([s])) == [
        ("fisk", "attr", "stor"),
        ("äta", "obj", "fisk"),
        ("äta", "subj", "katt"),
    ]


def test_lmi_matches_hand_arithmetic():
    # six pair occurrences: (äta,obj,fisk) x3, (äta,obj,bröd) x1,
    # (köpa,obj,fisk) x1, (fisk,attr,stor) x1
    pairs = [("äta", "obj", "fisk")] * 3 + [
        ("äta", "obj", "bröd"),
        ("köpa", "obj", "fisk"),
        ("fisk", "attr", "stor"),
    ]
    scores = lmi_scores(pairs)
    # f=3, N=6, f(äta,obj)=4, f(fisk,obj)=4: 3*log2(18/16)
    assert scores[("äta", "obj", "fisk")] == pytest.approx(3 * math.log2(18 / 16))
    # f=1, f(äta,obj)=4, f(bröd,obj)=1: log2(6/4)
    assert scores[("äta", "obj", "bröd")] == pytest.approx(math.log2(6 / 4))
    # f=1, f(köpa,obj)=1, f(fisk,obj)=4: log2(6/4)
    assert scores[("köpa", "obj", "fisk")] == pytest.approx(math.log2(6 / 4))
    # attr relation is counted in its own margins but shares N:
    # f=1, f(fisk,attr)=1, f(stor,attr)=1: log2(6)
    assert scores[("fisk", "attr", "stor")] == pytest.approx(math.log2(6.0))


def test_lmi_favors_frequent_exclusive_pairs():
    pairs = [("äta", "obj", "fisk")] * 10 + [("se", "obj", n) for n in
                                             ("hus", "bil", "båt", "berg", "sjö")]
    scores = lmi_scores(pairs)
    assert scores[("äta", "obj", "fisk")] > max(
        v for k, v in scores.items() if k[0] == "se")
