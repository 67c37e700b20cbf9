import random

import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES, SMALL, closure, knot_braids
from knotpos.diagram_model import connected_sum, pd_to_gauss_code, perturb, to_gauss
from knotpos.gauss_engine import GaussDiagram, intersection_graph, reduction_status
from knotpos.polynomials import conway_alexander, jones_via_bracket, poly_derived_invariants
from knotpos.positivity import generate_positive_corpus
from knotpos.vassiliev import LINKED_PAIR, TRIPLE_33, arrow_statistics, match_config, v2_gauss, v3_gauss
from oracles import polyak_viro_v2

EMPTY = GaussDiagram((), (), (), ())
TREFOIL = to_gauss(closure((1, 1, 1)))
CORPUS = generate_positive_corpus(11, 120, size_range=(3, 12))


def v2(d):
    return v2_gauss(to_gauss(d)) if d.c else 0


def v3(d):
    return v3_gauss(to_gauss(d)) if d.c else 0


def test_pattern_matches_on_trefoil():
    assert len(match_config(TREFOIL, LINKED_PAIR)) == 3
    assert len(match_config(TREFOIL, TRIPLE_33)) == 1


@pytest.mark.parametrize("pattern", [LINKED_PAIR, TRIPLE_33])
def test_patterns_on_empty_diagram(pattern):
    assert match_config(EMPTY, pattern) == []


def test_v2_values():
    assert v2_gauss(EMPTY) == 0
    assert (v2(FIXTURES["5_1"]), v2(FIXTURES["5_2"])) == (3, 2)
    assert v2_gauss(TREFOIL) == 1 == conway_alexander(closure((1, 1, 1)))["conway"].coeff(2)


def test_v3_values():
    assert v3_gauss(TREFOIL) == 4 == v3(FIXTURES["!3_1"])
    assert v3(FIXTURES["3_1"]) == -4
    assert v3(FIXTURES["6_2"]) == 4


def test_arrow_statistics_examples():
    s = arrow_statistics(to_gauss(closure((1,) * 5)))
    assert set(s["l"].values()) == {4}
    kink = GaussDiagram.from_tokens([(1, "U"), (1, "O")], {1: 1})
    s = arrow_statistics(kink)
    assert s["l"] == {1: 0} and s["distinguished"] == {1: 0}


def test_distinguished_counts_are_half_valence_on_positive_diagrams():
    for item in CORPUS[:40]:
        g = to_gauss(item.diagram)
        for b in range(2 * g.c):
            s = arrow_statistics(g, b)
            assert all(2 * s["distinguished"][k] == s["l"][k] for k in g.ids)


@pytest.mark.parametrize("name", SMALL)
def test_v2_basepoint_independent(name):
    g = to_gauss(FIXTURES[name])
    assert len({v2_gauss(g.with_basepoint(b), check=False) for b in range(2 * g.c)}) == 1


@pytest.mark.parametrize("name", SMALL)
def test_reidemeister_variants_keep_v2_v3(name):
    d = FIXTURES[name]
    rng = random.Random(name)
    for _ in range(3):
        e = perturb(d, rng, 3)
        assert e.c > d.c
        assert (v2(e), v3(e)) == (v2(d), v3(d))


@pytest.mark.parametrize("name", SMALL)
def test_mirror_behaviour(name):
    d = FIXTURES[name]
    assert v3(d.mirror()) == -v3(d)
    assert v2(d.mirror()) == v2(d)


@pytest.mark.parametrize("name", SMALL)
def test_identities_with_polynomials(name):
    d = FIXTURES[name]
    inv = poly_derived_invariants(jones_via_bracket(d), nabla=conway_alexander(d)["conway"])
    assert v2(d) == inv["v2"] == inv["alexanderSecondDerivative"] / 2
    assert v3(d) == inv["v3"]


@pytest.mark.parametrize("a,b", [("3_1", "3_1"), ("3_1", "!3_1"), ("5_2", "6_2"), ("7_4", "4_1")])
def test_v3_additive(a, b):
    s = connected_sum(FIXTURES[a], FIXTURES[b])
    assert v3(s) == v3(FIXTURES[a]) + v3(FIXTURES[b])
    assert v2(s) == v2(FIXTURES[a]) + v2(FIXTURES[b])


@given(knot_braids(max_letters=12, max_strands=4))
def test_v2_agrees_with_single_pattern_count(b):
    d = closure(b.letters, b.n)
    assert polyak_viro_v2(pd_to_gauss_code(d)) == v2(d)


@given(st.integers(0, len(CORPUS) - 1), st.randoms(use_true_random=False))
def test_switching_crossings_lowers_v2_and_v3(k, rng):
    d = CORPUS[k].diagram
    assert reduction_status(to_gauss(d))["isReduced"]
    idx = rng.sample(range(d.c), rng.randint(1, d.c))
    e = d
    for i in idx:
        e = e.switch(i)
    assert v3(e) < v3(d)
    if len(idx) < d.c:
        assert v2(e) < v2(d)


def test_lower_bounds_on_positive_diagrams():
    for item in CORPUS:
        d, g = item.diagram, to_gauss(item.diagram)
        st_ = reduction_status(g)
        c, a, b = d.c, v2_gauss(g), v3_gauss(g)
        lk = intersection_graph(g)["lk"]
        gc = item.meta["gCan"]
        assert b >= c and 4 * a >= c
        if st_["isBireduced"]:
            assert 3 * b >= 4 * lk
            if not st_["isComposite"]:
                assert b >= 4 * ((c - 1) // 2)
        assert lk >= 3 * gc and b >= 4 * gc and a >= gc
