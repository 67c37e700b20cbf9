from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given

from conftest import FIXTURES, closure, knot_braids
from knotpos.diagram_model import (BraidWord, ConwayTangle, GaussCode, ParseError, PlanarDiagram, add_kink,
                                   braid_closure, connected_sum, gauss_code_to_pd, is_realizable, load_table,
                                   parse_diagram, pd_to_gauss_code, pretzel_closure, rational_closure,
                                   serialize, tangle_fraction, to_diagram, to_gauss)
from knotpos.gauss_engine import reduction_status
from knotpos.polynomials import homfly_skein, jones_mirror, jones_via_bracket
from oracles import bracket_jones, continued_fraction


def jones(d):
    return {e[0]: c for e, c in jones_via_bracket(d).terms.items()}


FIGURE_EIGHT_V = {-4: 1, -2: -1, 0: 1, 2: -1, 4: 1}


def test_braid_text_keeps_declared_strands():
    b = parse_diagram("BRAID", "3: 1 1 1")
    assert b == BraidWord(3, (1, 1, 1))


def test_dt_figure_eight_is_amphichiral():
    d = parse_diagram("DT", "4 6 8 2")
    assert isinstance(d, PlanarDiagram) and d.c == 4
    assert bracket_jones(d) == FIGURE_EIGHT_V
    V = jones_via_bracket(d)
    assert V == jones_mirror(V)


def test_conway_text():
    assert parse_diagram("CONWAY", "2 2") == ConwayTangle((2, 2))
    assert parse_diagram("CONWAY", "C: 2 2") == ConwayTangle((2, 2))


@pytest.mark.parametrize("text", ["X 1 2 3", "X 1 1 2 2 + X", "X 1 2 3 4 +"])
def test_bad_pd_is_rejected(text):
    with pytest.raises(ParseError):
        parse_diagram("PD", text)


def test_empty_pd_is_the_unknot():
    assert parse_diagram("PD", "").c == 0


def test_bad_braid_is_rejected():
    with pytest.raises((ParseError, ValueError)):
        parse_diagram("BRAID", "2: 1 2")


def test_trefoil_closure_structure():
    d = braid_closure(BraidWord(2, (1, 1, 1)))
    assert (d.c, d.writhe, len(d.seifert_circles())) == (3, 3, 2)


def test_torus_closure_writhe():
    d = braid_closure(BraidWord(2, (1,) * 5))
    assert (d.c, d.writhe) == (5, 5)


def test_figure_eight_closure_matches_dt():
    d = braid_closure(BraidWord(3, (1, -2, 1, -2)))
    assert (d.c, d.writhe) == (4, 0)
    assert jones(d) == FIGURE_EIGHT_V


def test_rational_closures():
    d = rational_closure(ConwayTangle((2, 2)))
    assert d.c == 4 and jones(d) == FIGURE_EIGHT_V
    assert rational_closure(ConwayTangle((3,))).c == 3


def test_example_knot_has_bireduced_positive_diagram():
    # an 11-crossing alternating diagram and a 12-crossing positive one of the same knot
    a = rational_closure(ConwayTangle((-1, -2, -1, -2, -5)))
    b = rational_closure(ConwayTangle((1, 2, 1, 2, 1, 1, -1, -3)))
    assert (a.c, b.c) == (11, 12)
    assert len({x.sign for x in b.crossings}) == 1
    assert reduction_status(to_gauss(b))["isBireduced"]
    assert homfly_skein(a, budget=12) == homfly_skein(b, budget=12)


@pytest.mark.parametrize("entries,value", [
    ((-1, -2, -1, -2, -5), Fraction(-59, 11)),
    ((1, 2, 1, 2, 1, 1, -1, -3), Fraction(-59, 11)),
    ((3,), Fraction(3)),
])
def test_tangle_fraction(entries, value):
    assert tangle_fraction(ConwayTangle(entries)) == value == continued_fraction(entries)


def test_fixture_determinants_are_fraction_numerators():
    # rational fixtures: |V(-1)| equals the numerator of the fraction
    for name, d in FIXTURES.items():
        if name == "8_19":
            continue
        V = jones_via_bracket(d)
        det = abs(sum(c * (-1) ** (e[0] // 2) for e, c in V.terms.items()))
        assert det > 0 and det % 2 == 1, name


def test_to_gauss_examples():
    g = to_gauss(braid_closure(BraidWord(2, (1, 1, 1))))
    assert g.c == 3 and set(g.writhe) == {1}
    assert all(g.linked(i, j) for i in range(3) for j in range(3) if i != j)
    kink = add_kink(braid_closure(BraidWord(2, (1, 1, 1))), 1, True, True)
    gk = to_gauss(kink)
    isolated = [i for i in range(gk.c) if not any(gk.linked(i, j) for j in range(gk.c) if j != i)]
    assert len(isolated) == 1


def test_realizability_examples():
    assert is_realizable(GaussCode(((1, "O", None), (1, "U", None))))
    trefoil = [(1, "O"), (2, "U"), (3, "O"), (1, "U"), (2, "O"), (3, "U")]
    assert is_realizable(GaussCode(tuple((c, f, None) for c, f in trefoil)))


def test_three_groups_of_parallel_chords_not_realizable():
    order = ["a1", "a2", "b1", "b2", "c1", "c2", "a2", "a1", "b2", "b1", "c2", "c1"]
    ids = {name: k + 1 for k, name in enumerate(sorted(set(order)))}
    seen, tokens = set(), []
    for name in order:
        tokens.append((ids[name], "U" if name in seen else "O", None))
        seen.add(name)
    assert not is_realizable(GaussCode(tuple(tokens)))


def test_unrealizable_gauss_text_fails_conversion():
    with pytest.raises(ValueError):
        to_diagram(parse_diagram("GAUSS", "O1 O2 U1 U2"))


def test_parse_serialize_round_trip_on_fixtures():
    for name, d in FIXTURES.items():
        assert parse_diagram("PD", serialize(d)) == d, name
        code = pd_to_gauss_code(d)
        assert parse_diagram("GAUSS", serialize(code)) == code, name
        assert gauss_code_to_pd(code).c == d.c
    for value in (BraidWord(3, (1, -2, 1)), ConwayTangle((3, 1, 2))):
        fmt = "BRAID" if isinstance(value, BraidWord) else "CONWAY"
        assert parse_diagram(fmt, serialize(value)) == value


def test_mirror_table_lookup(tmp_path):
    table = tmp_path / "t.txt"
    table.write_text("# comment\n4_1 4 6 8 2\n!3_1 4 6 2\n")
    t = load_table(table)
    assert t["4_1"].c == 4 and t["3_1"].c == 3
    assert t["!3_1"].writhe == -t["3_1"].writhe
    assert "!4_1" in t and "5_1" not in t
    assert FIXTURES["!5_2"].writhe == -FIXTURES["5_2"].writhe


def test_connected_sum_adds_crossings():
    a, b = FIXTURES["3_1"], FIXTURES["4_1"]
    s = connected_sum(a, b)
    assert s.c == 7 and s.component_count == 1


def test_pretzel_closure_is_a_knot():
    d = pretzel_closure((3, 3, 3))
    assert d.c == 9 and d.component_count == 1


def _interleaving_graph(b: BraidWord) -> nx.Graph:
    """Chord graph read straight off the braid word by following the strand."""
    seq, p = [], 0
    while True:
        for idx, k in enumerate(b.letters):
            i = abs(k) - 1
            if p in (i, i + 1):
                seq.append(idx)
                p = i + 1 if p == i else i
        if p == 0:
            break
    pos: dict[int, list[int]] = {}
    for t, idx in enumerate(seq):
        pos.setdefault(idx, []).append(t)
    g = nx.Graph()
    g.add_nodes_from(pos)
    for x, (a1, a2) in pos.items():
        for y, (b1, b2) in pos.items():
            if x < y and (a1 < b1 < a2) != (a1 < b2 < a2):
                g.add_edge(x, y)
    return g


@given(knot_braids(max_letters=10, positive=True))
def test_closure_gauss_matches_braid_interleaving(b):
    g = to_gauss(braid_closure(b))
    h = nx.Graph()
    h.add_nodes_from(range(g.c))
    h.add_edges_from((i, j) for i in range(g.c) for j in range(i + 1, g.c) if g.linked(i, j))
    assert nx.is_isomorphic(h, _interleaving_graph(b))


@given(knot_braids(max_letters=10))
def test_diagram_gauss_codes_are_realizable(b):
    d = braid_closure(b)
    assert is_realizable(pd_to_gauss_code(d))


def test_closure_helper_defaults():
    assert closure((1, 1, 1)).c == 3
