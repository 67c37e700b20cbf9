"""Acceptance criteria, one test each.

Every test prints a single ``CRITERION n PASS|FAIL|SKIP`` line (visible with
``pytest -v``) that is repeated in the terminal summary.
"""

import os
import random
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache

import pytest

from conftest import ACCEPTANCE as RESULTS, FIXTURES, closure, random_knot_braid
from knotpos.diagram_model import (BraidWord, GaussCode, braid_closure, is_realizable, load_table, perturb,
                                   pd_to_gauss_code, pretzel_closure, to_gauss)
from knotpos.gauss_engine import intersection_graph, reduction_status, structural_checks
from knotpos.laurent import Laurent
from knotpos.moves import trivialize_by_loops, whitehead_double
from knotpos.polynomials import alexander_fox, homfly_skein, homfly_to_jones, jones_mirror, jones_via_bracket
from knotpos.positivity import (decide_braid_positive, generate_positive_corpus, invariants_from_homfly,
                                knot_invariants, obstruction_report)
from knotpos.surfaces_braids import braid_bounds, is_braided, seifert_decomposition, vogel_braiding
from knotpos.vassiliev import v2_gauss, v3_gauss

TABLE_ENV = "KNOTPOS_TABLE"

LM = ("l", "m")


def P(*terms):
    return Laurent({(a, b): c for c, a, b in terms}, LM)


PRINTED = {
    "12_2038": P((-7, 6, 0), (-9, 8, 0), (-3, 10, 0), (13, 6, 2), (13, 8, 2), (3, 10, 2),
                 (-7, 6, 4), (-6, 8, 4), (-1, 10, 4), (1, 6, 6), (1, 8, 6)),
    "!12_1930": P((4, 8, 0), (2, 10, 0), (-1, 12, 0), (-4, 4, 2), (2, 6, 2), (-4, 8, 2), (1, 10, 2), (1, 4, 4)),
}


@contextmanager
def criterion(n, title, capsys):
    try:
        yield
    except pytest.skip.Exception as err:
        RESULTS[n] = f"CRITERION {n:>2} SKIP  {title} ({err.msg})"
        _show(capsys, RESULTS[n])
        raise
    except BaseException:
        RESULTS[n] = f"CRITERION {n:>2} FAIL  {title}"
        _show(capsys, RESULTS[n])
        raise
    RESULTS[n] = f"CRITERION {n:>2} PASS  {title}"
    _show(capsys, RESULTS[n])


def _show(capsys, line):
    with capsys.disabled():
        print("\n" + line)


@lru_cache(maxsize=None)
def corpus():
    return generate_positive_corpus(0, 500, size_range=(3, 16))


@lru_cache(maxsize=None)
def table():
    path = os.environ.get(TABLE_ENV)
    return load_table(path) if path and os.path.exists(path) else None


def v2(d):
    return v2_gauss(to_gauss(d), check=False) if d.c else 0


def v3(d):
    return v3_gauss(to_gauss(d), check=False) if d.c else 0


def derivative_at_one(poly, k):
    """k-th derivative at t = 1 of a polynomial stored with doubled exponents."""
    total = Fraction(0)
    for (e,), c in poly.terms.items():
        a, f = Fraction(e, 2), Fraction(1)
        for i in range(k):
            f *= a - i
        total += c * f
    return total


# ---------------------------------------------------------------- 1


def test_criterion_01_gauss_sum_anchors(capsys):
    with criterion(1, "Gauss-sum anchors for v2 and v3", capsys):
        assert v3(closure((1, 1, 1))) == 4 == v3(FIXTURES["!3_1"])
        assert v3(FIXTURES["3_1"]) == -4
        assert v3(FIXTURES["6_2"]) == 4
        assert v2(FIXTURES["5_1"]) == 3
        assert v2(FIXTURES["5_2"]) == 2


# ---------------------------------------------------------------- 2


def test_criterion_02_identity_suite(capsys):
    with criterion(2, "v2, v3 from Gauss sums match Jones and Alexander derivatives", capsys):
        diagrams = []
        for name in sorted(FIXTURES):
            d = FIXTURES[name]
            if d.c <= 10:
                diagrams += [d, d.mirror(), perturb(d, random.Random(name), 2)]
        assert len(diagrams) >= 50
        for d in diagrams:
            V = jones_via_bracket(d)
            D = alexander_fox(d)
            a, b = v2(d), v3(d)
            V2, V3 = derivative_at_one(V, 2), derivative_at_one(V, 3)
            assert a == -V2 / 6 == derivative_at_one(D, 2) / 2
            assert b == -V2 / 3 - V3 / 9


# ---------------------------------------------------------------- 3


def test_criterion_03_homfly_golden_values(capsys):
    with criterion(3, "HOMFLY of 12_2038 and !12_1930 from table input", capsys):
        t = table()
        if t is None or not all(name in t for name in PRINTED):
            pytest.skip(f"set {TABLE_ENV} to a DT table containing 12_2038 and 12_1930")
        for name, poly in PRINTED.items():
            assert homfly_skein(t[name], budget=12) == poly


# ---------------------------------------------------------------- 4


def test_criterion_04_positive_diagram_theorems(capsys):
    with criterion(4, "inequalities on 500 generated positive diagrams", capsys):
        items = corpus()
        assert len(items) >= 500
        for item in items:
            d = item.diagram
            assert 3 <= d.c <= 16 and {x.sign for x in d.crossings} == {1}
            g = to_gauss(d)
            st = reduction_status(g)
            c, a, b = d.c, v2_gauss(g), v3_gauss(g)
            gc = int(seifert_decomposition(d).canonical_genus)
            lk = intersection_graph(g)["lk"]
            inv = knot_invariants(d, budget=16, signature=False)
            assert st["isReduced"] and b >= c
            if st["isBireduced"] and not st["isComposite"]:
                assert b >= 4 * ((c - 1) // 2)
            assert 4 * a >= c
            assert b > a and c * (b - a) >= 2 * a * a
            assert 3 * b <= 4 * a * c
            assert b >= 4 * gc and a >= gc and lk >= 3 * gc
            assert 5 * a >= inv["maxDegV"]
            assert 3 * b >= 8 * a
            assert b >= 2 * inv["maxDegmP"]


# ---------------------------------------------------------------- 5


def test_criterion_05_loop_accounting(capsys):
    with criterion(5, "loop-move accounting and per-move ledger", capsys):
        moves = 0
        for item in corpus():
            g = to_gauss(item.diagram)
            out = trivialize_by_loops(g)
            gc = seifert_decomposition(item.diagram).canonical_genus
            assert 5 * v2_gauss(g) >= g.c + out["totalSwitches"]
            assert out["totalSwitches"] >= gc
            for e in out["v2Ledger"]:
                moves += 1
                assert e["l5"] == "passes"
                assert 5 * e["v2Drop"] >= e["cDrop"] + Fraction(e["halfK"])
        assert moves >= len(corpus())


# ---------------------------------------------------------------- 6


def test_criterion_06_positive_braids(capsys):
    with criterion(6, "Jones bottom degree and v2 bound on 100 positive braids", capsys):
        rng = random.Random(6)
        for _ in range(100):
            b = random_knot_braid(rng, max_letters=14, max_strands=5, positive=True)
            d = braid_closure(b)
            V = jones_via_bracket(d)
            lo = V.degrees()[0]
            n, w = b.n, len(b.letters)
            assert Fraction(lo, 2) == Fraction(w + 1 - n, 2) == braid_bounds(b)["minDegV_formula"]
            assert V.coeff(lo) == 1
            assert v2(d) >= Fraction(w * w, 4 * n * (n - 1)) - Fraction((2 * n - 3) * (n - 1), 8)


# ---------------------------------------------------------------- 7


def _random_diagrams(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        kind = rng.random()
        if kind < 0.4:
            d = braid_closure(random_knot_braid(rng, max_letters=8, max_strands=4))
            d = perturb(d, rng, rng.randint(1, 2))
        elif kind < 0.7:
            names = [n for n in sorted(FIXTURES) if FIXTURES[n].c <= 10]
            d = FIXTURES[rng.choice(names)]
            if rng.random() < 0.5:
                d = d.mirror()
        else:
            d = pretzel_closure(tuple(rng.choice((1, 3, -3, 2, -2)) for _ in range(3)))
        if d.component_count == 1 and 1 <= d.c <= 12:
            out.append(d)
    return out


def test_criterion_07_vogel(capsys):
    with criterion(7, "Vogel braiding keeps writhe, circles and Jones", capsys):
        diagrams = _random_diagrams(100, 7)
        assert sum(not is_braided(d) for d in diagrams) >= 30
        for d in diagrams:
            out = vogel_braiding(d)
            s = seifert_decomposition(d)
            assert is_braided(out["diagram"])
            assert out["braid"].n == s.circles and out["braid"].exponent_sum == s.writhe
            assert jones_via_bracket(braid_closure(out["braid"])) == jones_via_bracket(d)


# ---------------------------------------------------------------- 8


def test_criterion_08_obstruction_verdicts(capsys):
    with criterion(8, "obstruction verdicts on the worked examples", capsys):
        for name in ("4_1", "6_3", "6_2"):
            assert obstruction_report(knot_invariants(FIXTURES[name])).overall == "not-positive"
        for name in ("!5_2", "!7_2", "7_4", "7_3", "!7_5"):
            assert obstruction_report(knot_invariants(FIXTURES[name])).overall == "not-braid-positive"
        # !10_2 is also not positive; its braid section fails on min deg V = 1
        r = obstruction_report(knot_invariants(FIXTURES["!10_2"]))
        assert r.overall != "consistent"
        assert any(e.name == "min-deg-quarter-crossings" and e.verdict == "violated" for e in r.braid)
        # the two 12 crossing knots, from their printed HOMFLY polynomials
        assert obstruction_report(invariants_from_homfly(PRINTED["12_2038"])).overall == "not-positive"
        r = obstruction_report(invariants_from_homfly(PRINTED["!12_1930"]))
        assert r.overall == "not-braid-positive" and r.violated() == ["min-deg-quarter-crossings"]
        t = table()
        if t is not None and all(name in t for name in PRINTED):
            assert obstruction_report(knot_invariants(t["12_2038"])).overall == "not-positive"
            assert obstruction_report(knot_invariants(t["!12_1930"])).overall == "not-braid-positive"
        else:
            _show(capsys, f"  note: {TABLE_ENV} not set; 12 crossing verdicts use the printed HOMFLY only")


# ---------------------------------------------------------------- 9


def test_criterion_09_whitehead_doubles(capsys):
    with criterion(9, "v3 of Whitehead doubles is 8 v2 times the clasp sign", capsys):
        names = sorted(n for n in FIXTURES if FIXTURES[n].c <= 8)
        assert len(names) >= 20
        for name in names:
            d = FIXTURES[name]
            base = v2(d)
            for s in (1, -1):
                w = to_gauss(whitehead_double(d, s))
                assert v2_gauss(w, check=False) == 0
                assert v3_gauss(w, check=False) == 8 * s * base
        for name in ("!3_1", "!5_1", "!5_2"):
            J = homfly_to_jones(homfly_skein(whitehead_double(FIXTURES[name], 1), budget=40))
            assert J != jones_mirror(J)


# ---------------------------------------------------------------- 10


def test_criterion_10_braid_decision(capsys):
    with criterion(10, "decide_braid_positive on the trefoil and figure eight", capsys):
        out = decide_braid_positive(FIXTURES["!3_1"])
        assert out.answer == "yes" and out.witness == BraidWord(2, (1, 1, 1))
        assert decide_braid_positive(FIXTURES["4_1"]).answer == "no"


# ---------------------------------------------------------------- 11


def _three_by_two():
    order = ["a1", "a2", "b1", "b2", "c1", "c2", "a2", "a1", "b2", "b1", "c2", "c1"]
    ids = {name: k + 1 for k, name in enumerate(sorted(set(order)))}
    seen, tokens = set(), []
    for name in order:
        tokens.append((ids[name], "U" if name in seen else "O", None))
        seen.add(name)
    return GaussCode(tuple(tokens))


def test_criterion_11_structural_properties(capsys):
    with criterion(11, "even valence, double connectivity, realizability, mirror symmetry", capsys):
        assert not is_realizable(_three_by_two())
        diagrams = [item.diagram for item in corpus()] + list(FIXTURES.values()) + _random_diagrams(100, 11)
        for d in diagrams:
            assert is_realizable(pd_to_gauss_code(d))
            g = to_gauss(d)
            assert structural_checks(g) == {"evenValence": True, "doubleConnectivity": True}
        for item in corpus():
            d = item.diagram
            assert v3(d.mirror()) == -v3(d)
            assert v2(d.mirror()) == v2(d)
