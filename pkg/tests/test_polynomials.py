import random

import pytest
from hypothesis import given

from conftest import FIXTURES, closure, knot_braids
from knotpos.diagram_model import unknot
from knotpos.laurent import Laurent
from knotpos.polynomials import (BudgetExceeded, alexander_fox, conway_alexander, homfly_skein, homfly_to_conway,
                                 homfly_to_jones, jones_mirror, jones_state_sum, jones_via_bracket,
                                 poly_derived_invariants, seifert_signature)
from knotpos.positivity import knot_invariants, obstruction_report
from oracles import bracket_jones, symmetric_signature

LM = ("l", "m")


def P(*terms):
    """HOMFLY polynomial from (coefficient, l-degree, m-degree) triples."""
    return Laurent({(a, b): c for c, a, b in terms}, LM)


def z(*coeffs):
    return Laurent({(2 * k,): c for k, c in enumerate(coeffs)}, ("z",))


def test_unknot_values():
    u = unknot()
    assert jones_via_bracket(u) == Laurent.const(1)
    assert homfly_skein(u) == Laurent.const(1, LM)
    assert conway_alexander(u)["conway"] == Laurent.const(1, ("z",))
    assert seifert_signature(u)["signature"] == 0


def test_minimal_jones_degree_one():
    for d in (FIXTURES["!5_2"], closure((1, 1, 1))):
        V = jones_via_bracket(d)
        assert V.degrees()[0] == 2 and V.coeff(V.degrees()[0]) > 0


def test_positive_trefoil_homfly():
    assert homfly_skein(closure((1, 1, 1))) == P((-2, 2, 0), (-1, 4, 0), (1, 2, 2))


def test_conway_examples():
    assert conway_alexander(closure((1, 1, 1)))["conway"] == z(1, 1)
    out = conway_alexander(FIXTURES["6_3"])
    assert out["conway"] == z(1, 1, 1) and out["conwayNonnegative"]
    inv = knot_invariants(FIXTURES["6_3"])
    assert obstruction_report(inv).overall == "not-positive"


def test_derived_invariants_from_jones():
    assert poly_derived_invariants(Laurent.const(1))["v2"] == 0
    assert poly_derived_invariants(Laurent.const(1))["v3"] == 0
    assert poly_derived_invariants(jones_via_bracket(closure((1, 1, 1))))["v3"] == 4
    assert poly_derived_invariants(jones_via_bracket(FIXTURES["5_2"]))["v2"] == 2


def test_positive_trefoil_signature():
    out = seifert_signature(closure((1, 1, 1)))
    V = out["matrix"]
    assert V == [[-1, 1], [0, -1]]
    assert out["signature"] == -symmetric_signature([[V[i][j] + V[j][i] for j in range(2)] for i in range(2)]) == 2


@pytest.mark.parametrize("name,sigma", [("4_1", 0), ("3_1", -2), ("!3_1", 2), ("5_1", -4), ("!7_4", -2)])
def test_signature_values(name, sigma):
    assert seifert_signature(FIXTURES[name])["signature"] == sigma


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        homfly_skein(FIXTURES["8_19"], budget=4)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_engines_agree(name):
    d = FIXTURES[name]
    H = homfly_skein(d, budget=14)
    V = jones_via_bracket(d)
    assert homfly_to_jones(H) == V == jones_state_sum(d)
    ca = conway_alexander(d)
    assert homfly_to_conway(H) == ca["conway"]
    assert alexander_fox(d) == ca["alexander"] == seifert_signature(d)["alexanderFromMatrix"]
    lo, hi = V.degrees()
    assert (hi - lo) / 2 <= d.c
    assert jones_via_bracket(d.mirror()) == jones_mirror(V)


@given(knot_braids(max_letters=9, max_strands=4))
def test_bracket_matches_state_oracle(b):
    d = closure(b.letters, b.n)
    assert {e[0]: c for e, c in jones_via_bracket(d).terms.items()} == bracket_jones(d)


@given(knot_braids(max_letters=10, max_strands=4))
def test_skein_relation(b):
    # l^-1 P(L+) + l P(L-) + m P(L0) = 0
    d = closure(b.letters, b.n)
    i = random.Random(str(b)).randrange(d.c)
    here, other, zero = homfly_skein(d), homfly_skein(d.switch(i)), homfly_skein(d.smooth(i))
    plus, minus = (here, other) if d.crossings[i].sign > 0 else (other, here)
    l_inv, l, m = Laurent.mono((-1, 0), 1, LM), Laurent.mono((1, 0), 1, LM), Laurent.mono((0, 1), 1, LM)
    assert l_inv * plus + l * minus + m * zero == Laurent({}, LM)


@given(knot_braids(max_letters=12, max_strands=4))
def test_fox_matches_seifert_matrix(b):
    d = closure(b.letters, b.n)
    assert alexander_fox(d) == seifert_signature(d)["alexanderFromMatrix"]


@given(knot_braids(max_letters=12, max_strands=4))
def test_signature_mod_four_follows_determinant_sign(b):
    d = closure(b.letters, b.n)
    nabla = conway_alexander(d)["conway"]
    at = sum(c * (-4) ** (e[0] // 2) for e, c in nabla.terms.items())
    sigma = seifert_signature(d)["signature"]
    assert sigma % 2 == 0
    assert (sigma % 4 == 0) == (at > 0)


@given(knot_braids(max_letters=12, max_strands=4, positive=True))
def test_positive_braid_jones_bottom(b):
    V = jones_via_bracket(closure(b.letters, b.n))
    lo = V.degrees()[0]
    assert lo == len(b.letters) + 1 - b.n
    assert V.coeff(lo) == 1
