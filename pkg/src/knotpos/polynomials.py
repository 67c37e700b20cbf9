"""Exact polynomial invariants: Jones by bracket contraction, HOMFLY and Conway
by skein recursion on Gauss codes, Alexander from the Wirtinger presentation,
and the Seifert matrix of a braided diagram.

One-variable polynomials in t store exponents in units of t^(1/2).  HOMFLY
polynomials use variables (l, m) with

    l^-1 P(L+) + l P(L-) + m P(L0) = 0,   P(unknot) = 1,

which makes positive knots have positive l-degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .diagram_model import BraidWord, PlanarDiagram
from .laurent import Laurent

__all__ = [
    "BudgetExceeded", "jones_via_bracket", "jones_state_sum", "kauffman_bracket",
    "homfly_skein", "conway_skein", "conway_alexander", "alexander_fox",
    "homfly_to_jones", "homfly_to_conway", "conway_to_alexander",
    "morton_cromwell_values", "poly_derived_invariants", "seifert_signature",
    "braid_seifert_matrix", "signature_of", "jones_mirror", "SkeinMemo",
    "DEFAULT_SKEIN_BUDGET",
]

DEFAULT_SKEIN_BUDGET = 16

T_NAMES = ("t",)
Z_NAMES = ("z",)
LM_NAMES = ("l", "m")


class BudgetExceeded(RuntimeError):
    """The diagram is larger than the configured skein budget."""


# ---------------------------------------------------------------- dict polys

def _acc(acc: dict, p: dict, coef: int, shift: tuple):
    for e, c in p.items():
        k = tuple(a + b for a, b in zip(e, shift))
        v = acc.get(k, 0) + coef * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def _mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            k = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _pow(p: dict, k: int, one: dict) -> dict:
    out = one
    for _ in range(k):
        out = _mul(out, p)
    return out


# ---------------------------------------------------------------- bracket

def _bracket_smoothings(x) -> tuple[tuple[int, int, int, int], tuple[int, int, int, int]]:
    a, b, c, d = x.arcs
    # A-smoothing joins (a, b) and (c, d); the A^-1 one joins (a, d) and (b, c)
    return (a, b, c, d), (a, d, b, c)


def _contraction_order(pd: PlanarDiagram) -> list[int]:
    """Greedy order keeping the set of open arcs small."""
    remaining = set(range(pd.c))
    open_arcs: set[int] = set()
    order = []
    while remaining:
        best = min(remaining, key=lambda i: (-len(open_arcs & set(pd.crossings[i].arcs)),
                                             len(set(pd.crossings[i].arcs) - open_arcs), i))
        remaining.discard(best)
        order.append(best)
        arcs = pd.crossings[best].arcs
        open_arcs ^= set(arcs)
        # an arc used twice by one crossing is a closed kink
        open_arcs -= {e for e in arcs if arcs.count(e) == 2}
    return order


def _join(partner: dict, x: int, y: int) -> tuple[dict, int]:
    """Add the strand x-y to a partial matching; returns (matching, closed loops)."""
    if x == y:
        return partner, 1
    px = partner.get(x)
    py = partner.get(y)
    if px is not None and px == y:
        p = dict(partner)
        del p[x], p[y]
        return p, 1
    p = dict(partner)
    if px is not None and py is not None:
        del p[x], p[y]
        p[px], p[py] = py, px
    elif px is not None:
        del p[x]
        p[px], p[y] = y, px
    elif py is not None:
        del p[y]
        p[py], p[x] = x, py
    else:
        p[x], p[y] = y, x
    return p, 0


def kauffman_bracket(pd: PlanarDiagram) -> Laurent:
    """Unnormalized bracket in A, with <unknot> = 1."""
    delta = {2: -1, -2: -1}
    states: dict[frozenset, dict] = {frozenset(): {0: 1}}
    for idx in _contraction_order(pd):
        x = pd.crossings[idx]
        new: dict[frozenset, dict] = {}
        for key, poly in states.items():
            base = dict(key)
            for (p1, p2, q1, q2), shift in zip(_bracket_smoothings(x), (1, -1)):
                m, l1 = _join(base, p1, p2)
                m, l2 = _join(m, q1, q2)
                factor = {shift: 1}
                for _ in range(l1 + l2):
                    factor = _mul1(factor, delta)
                k = frozenset(m.items())
                tgt = new.setdefault(k, {})
                for e1, c1 in poly.items():
                    for e2, c2 in factor.items():
                        v = tgt.get(e1 + e2, 0) + c1 * c2
                        if v:
                            tgt[e1 + e2] = v
                        else:
                            tgt.pop(e1 + e2, None)
        states = {k: v for k, v in new.items() if v}
    total = states.get(frozenset(), {})
    result = Laurent({(e,): c for e, c in total.items()}, ("A",))
    loops = pd.free_loops
    if pd.c:
        result = result.divexact(Laurent({(2,): -1, (-2,): -1}, ("A",)))
    else:
        result = Laurent.const(1, ("A",))
        loops -= 1
    d = Laurent({(2,): -1, (-2,): -1}, ("A",))
    for _ in range(max(loops, 0)):
        result = result * d
    return result


def _mul1(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _bracket_to_jones(bracket: Laurent, writhe: int) -> Laurent:
    # V = (-A^3)^-w <D> at A = t^(-1/4); an A-exponent e becomes -e/2 half units
    sign = -1 if writhe % 2 else 1
    out = {}
    for (e,), c in bracket.terms.items():
        k = e - 3 * writhe
        if k % 2:
            raise ArithmeticError("odd A-exponent in normalized bracket")
        out[(-k // 2,)] = sign * c
    return Laurent(out, T_NAMES)


def jones_via_bracket(pd: PlanarDiagram) -> Laurent:
    """Jones polynomial, exponents in half powers of t; V(unknot) = 1."""
    return _bracket_to_jones(kauffman_bracket(pd), pd.writhe)


def jones_state_sum(pd: PlanarDiagram) -> Laurent:
    """Plain 2^c state sum of the bracket; a slow independent reference."""
    total: dict[int, int] = {}
    for choice in product((0, 1), repeat=pd.c):
        parent: dict[int, int] = {}

        def find(e):
            while parent.setdefault(e, e) != e:
                e = parent[e]
            return e

        for x, ch in zip(pd.crossings, choice):
            p1, p2, q1, q2 = _bracket_smoothings(x)[ch]
            for u, v in ((p1, p2), (q1, q2)):
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        loops = len({find(e) for x in pd.crossings for e in x.arcs}) + pd.free_loops
        shift = choice.count(0) - choice.count(1)
        # delta^(loops-1)
        poly = {shift: 1}
        for _ in range(loops - 1):
            poly = _mul1(poly, {2: -1, -2: -1})
        for e, c in poly.items():
            total[e] = total.get(e, 0) + c
    if pd.c == 0:
        total = {0: 1}
        for _ in range(pd.free_loops - 1):
            total = _mul1(total, {2: -1, -2: -1})
    return _bracket_to_jones(Laurent({(e,): c for e, c in total.items()}, ("A",)), pd.writhe)


def jones_mirror(v: Laurent) -> Laurent:
    return v.substitute_exponents(lambda e: (-e[0],))


# ---------------------------------------------------------------- skein engine

# A code is a tuple of components, each a tuple of (crossing id, over?) tokens.

def _code_of(pd: PlanarDiagram) -> tuple[tuple, dict]:
    enter = {}
    for i, x in enumerate(pd.crossings):
        enter[x.under_in] = (i, False)
        enter[x.over_in] = (i, True)
    comps = []
    for start, length in pd.components:
        comps.append(tuple(enter[e] for e in range(start, start + length)))
    comps.extend(() for _ in range(pd.free_loops))
    signs = {i: x.sign for i, x in enumerate(pd.crossings)}
    return tuple(comps), signs


def _drop(comps, signs, ids):
    ids = set(ids)
    new = tuple(tuple(t for t in comp if t[0] not in ids) for comp in comps)
    return new, {k: v for k, v in signs.items() if k not in ids}


def _occurrences(comps):
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, comp in enumerate(comps):
        for p, (x, _) in enumerate(comp):
            occ.setdefault(x, []).append((ci, p))
    return occ


def _adjacent(comps, a, b) -> bool:
    (ca, pa), (cb, pb) = a, b
    if ca != cb:
        return False
    n = len(comps[ca])
    return (pa - pb) % n in (1, n - 1)


def _bigons(comps, signs):
    """Yield (x, y, kind): kind 'r2' for a removable pair, 'twist' otherwise."""
    occ = _occurrences(comps)
    for ci, comp in enumerate(comps):
        n = len(comp)
        if n < 2:
            continue
        for p in range(n):
            (x, ox), (y, oy) = comp[p], comp[(p + 1) % n]
            if x == y:
                continue
            ox2 = [o for o in occ[x] if o != (ci, p)][0]
            oy2 = [o for o in occ[y] if o != (ci, (p + 1) % n)][0]
            if not _adjacent(comps, ox2, oy2):
                continue
            if ox == oy and signs[x] == -signs[y]:
                yield x, y, "r2"
            elif ox != oy and signs[x] == signs[y]:
                yield x, y, "twist"


def _simplify(comps, signs):
    while True:
        changed = False
        for comp in comps:
            n = len(comp)
            for p in range(n):
                if n and comp[p][0] == comp[(p + 1) % n][0] and n >= 2:
                    comps, signs = _drop(comps, signs, [comp[p][0]])
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        for x, y, kind in _bigons(comps, signs):
            if kind == "r2":
                comps, signs = _drop(comps, signs, [x, y])
                changed = True
                break
        if not changed:
            return comps, signs


def _encode(comps, signs, first, rot):
    labels: dict[int, int] = {}
    out: list = []
    order = [first]
    done = {first}
    seq = comps[first][rot:] + comps[first][:rot]
    pending = [c for c in range(len(comps)) if c != first]
    while True:
        for x, o in seq:
            lab = labels.setdefault(x, len(labels))
            out.append((lab, o, signs[x]))
        out.append((-1, False, 0))
        if not pending:
            break
        best = None
        for c in pending:
            for p, (x, _) in enumerate(comps[c]):
                if x in labels and (best is None or labels[x] < best[0]):
                    best = (labels[x], c, p)
        if best is None:
            c, p = pending[0], 0
        else:
            _, c, p = best
        pending.remove(c)
        done.add(c)
        seq = comps[c][p:] + comps[c][:p]
    return tuple(out)


def _canonical(comps, signs):
    best = None
    for first, comp in enumerate(comps):
        for rot in range(len(comp)):
            enc = _encode(comps, signs, first, rot)
            if best is None or enc < best:
                best = enc
    free = sum(1 for c in comps if not c)
    return free, len(comps), best


def _switch(comps, signs, x):
    new = tuple(tuple((y, not o) if y == x else (y, o) for y, o in comp) for comp in comps)
    s = dict(signs)
    s[x] = -s[x]
    return new, s


def _smooth(comps, signs, x):
    where = [(ci, p) for ci, comp in enumerate(comps) for p, (y, _) in enumerate(comp) if y == x]
    (c1, p1), (c2, p2) = where
    rest = [comp for ci, comp in enumerate(comps) if ci not in (c1, c2)]
    s = {k: v for k, v in signs.items() if k != x}
    if c1 == c2:
        comp = comps[c1]
        i, j = sorted((p1, p2))
        loop_a = comp[i + 1:j]
        loop_b = comp[j + 1:] + comp[:i]
        return tuple(rest + [loop_a, loop_b]), s
    a, b = comps[c1], comps[c2]
    merged = a[p1 + 1:] + a[:p1] + b[p2 + 1:] + b[:p2]
    return tuple(rest + [merged]), s


def _bad_crossing(comps):
    """First crossing met from below in a best-basepoint traversal, or None."""
    seen: set[int] = set()
    for comp in comps:
        best = None
        for rot in range(len(comp)) or [0]:
            local = set(seen)
            first_bad = None
            count = 0
            for x, o in comp[rot:] + comp[:rot]:
                if x in local:
                    continue
                local.add(x)
                if not o:
                    count += 1
                    if first_bad is None:
                        first_bad = x
            if best is None or count < best[0]:
                best = (count, first_bad, local)
            if count == 0:
                break
        if best is None:
            continue
        if best[1] is not None:
            return best[1]
        seen = best[2]
    return None


def _split_groups(comps):
    parent = list(range(len(comps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    for ci, comp in enumerate(comps):
        for x, _ in comp:
            if x in owner:
                a, b = find(owner[x]), find(ci)
                if a != b:
                    parent[a] = b
            else:
                owner[x] = ci
    groups: dict[int, list[int]] = {}
    for ci in range(len(comps)):
        groups.setdefault(find(ci), []).append(ci)
    return list(groups.values())


def _knot_cut(comp):
    """Positions (i, length) of a proper segment holding only complete chords."""
    m = len(comp)
    pos: dict[int, list[int]] = {}
    for p, (x, _) in enumerate(comp):
        pos.setdefault(x, []).append(p)
    partner = [0] * m
    for a, b in pos.values():
        partner[a], partner[b] = b, a
    for i in range(m):
        open_ends = 0
        for length in range(1, m - 1):
            p = (i + length - 1) % m
            if (partner[p] - i) % m < length:
                open_ends -= 1
            else:
                open_ends += 1
            if open_ends == 0 and length >= 2:
                return i, length
    return None


@dataclass(frozen=True)
class _SkeinRules:
    nvars: int
    plus: tuple    # P(+) = c1 * mono1 * P(-) + c2 * mono2 * P(0)
    minus: tuple   # P(-) = c1 * mono1 * P(+) + c2 * mono2 * P(0)
    delta: dict    # value of the two-component unlink

    @property
    def one(self) -> dict:
        return {(0,) * self.nvars: 1}


HOMFLY_RULES = _SkeinRules(
    2,
    ((-1, (2, 0)), (-1, (1, 1))),
    ((-1, (-2, 0)), (-1, (-1, 1))),
    {(1, -1): -1, (-1, -1): -1},
)

CONWAY_RULES = _SkeinRules(
    1,
    ((1, (0,)), (1, (1,))),
    ((1, (0,)), (-1, (1,))),
    {},
)


@dataclass
class SkeinMemo:
    """Task-local cache of skein values keyed by canonical codes."""

    table: dict = field(default_factory=dict)
    calls: int = 0


def _skein(comps, signs, rules: _SkeinRules, memo: SkeinMemo) -> dict:
    memo.calls += 1
    comps, signs = _simplify(comps, signs)
    if not signs:
        return _pow(rules.delta, len(comps) - 1, rules.one)
    groups = _split_groups(comps)
    if len(groups) > 1:
        out = _pow(rules.delta, len(groups) - 1, rules.one)
        for g in groups:
            sub = tuple(comps[i] for i in g)
            out = _mul(out, _skein(sub, {x: signs[x] for c in sub for x, _ in c}, rules, memo))
            if not out:
                break
        return out
    key = _canonical(comps, signs)
    if key in memo.table:
        return memo.table[key]
    if len(comps) == 1:
        cut = _knot_cut(comps[0])
        if cut is not None:
            i, length = cut
            comp = comps[0]
            seg = tuple(comp[(i + k) % len(comp)] for k in range(length))
            ids = {x for x, _ in seg}
            rest = tuple(t for t in comp if t[0] not in ids)
            a = _skein((seg,), {x: signs[x] for x in ids}, rules, memo)
            b = _skein((rest,), {x: s for x, s in signs.items() if x not in ids}, rules, memo)
            out = _mul(a, b)
            memo.table[key] = out
            return out
    x = next((bx for bx, _, kind in _bigons(comps, signs) if kind == "twist"), None)
    if x is None:
        x = _bad_crossing(comps)
    if x is None:
        out = _pow(rules.delta, len(comps) - 1, rules.one)
        memo.table[key] = out
        return out
    (c1, m1), (c2, m2) = rules.plus if signs[x] > 0 else rules.minus
    sw = _skein(*_switch(comps, signs, x), rules, memo)
    sm = _skein(*_smooth(comps, signs, x), rules, memo)
    out: dict = {}
    _acc(out, sw, c1, m1)
    _acc(out, sm, c2, m2)
    memo.table[key] = out
    return out


def homfly_skein(pd: PlanarDiagram, budget: int = DEFAULT_SKEIN_BUDGET,
                 memo: SkeinMemo | None = None) -> Laurent:
    """HOMFLY polynomial P(l, m) by skein recursion down to descending diagrams."""
    if pd.c > budget:
        raise BudgetExceeded(f"{pd.c} crossings exceed the skein budget {budget}")
    comps, signs = _code_of(pd)
    return Laurent(_skein(comps, signs, HOMFLY_RULES, memo or SkeinMemo()), LM_NAMES)


def conway_skein(pd: PlanarDiagram, budget: int = 40, memo: SkeinMemo | None = None) -> Laurent:
    """Conway polynomial by its own skein recursion."""
    if pd.c > budget:
        raise BudgetExceeded(f"{pd.c} crossings exceed the skein budget {budget}")
    comps, signs = _code_of(pd)
    return Laurent(_skein(comps, signs, CONWAY_RULES, memo or SkeinMemo()), Z_NAMES)


# ---------------------------------------------------------------- specializations

def _binomial_row(b: int) -> dict[int, int]:
    """(t^(-1/2) - t^(1/2))^b in half units."""
    out = {0: 1}
    for _ in range(b):
        out = _mul1(out, {-1: 1, 1: -1})
    return out


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


def homfly_to_jones(p: Laurent) -> Laurent:
    """V(t) = P(l = -i t, m = i (t^(-1/2) - t^(1/2)))."""
    if not p:
        return Laurent({}, T_NAMES)
    bmin = min(0, p.degrees(1)[0])
    out: dict[int, int] = {}
    for (a, b), c in p.terms.items():
        if (a + b) % 2:
            raise ArithmeticError("HOMFLY term with odd total degree")
        unit = _sgn(a) * _sgn((a + b) // 2)
        for e, k in _binomial_row(b - bmin).items():
            key = 2 * a + e
            out[key] = out.get(key, 0) + unit * c * k
    v = Laurent({(e,): c for e, c in out.items()}, T_NAMES)
    step = Laurent({(-1,): 1, (1,): -1}, T_NAMES)
    for _ in range(-bmin):
        v = v.divexact(step)
    return v


def homfly_to_conway(p: Laurent) -> Laurent:
    """nabla(z) = P(l = i, m = i z)."""
    out: dict[int, int] = {}
    for (a, b), c in p.terms.items():
        if (a + b) % 2:
            raise ArithmeticError("HOMFLY term with odd total degree")
        unit = _sgn((a + b) // 2)
        out[b] = out.get(b, 0) + unit * c
    return Laurent({(e,): c for e, c in out.items()}, Z_NAMES)


def conway_to_alexander(nabla: Laurent) -> Laurent:
    """Delta(t) = nabla(t^(1/2) - t^(-1/2)), exponents in half units."""
    out: dict[int, int] = {}
    for (b,), c in nabla.terms.items():
        row = {0: 1}
        for _ in range(b):
            row = _mul1(row, {1: 1, -1: -1})
        for e, k in row.items():
            out[e] = out.get(e, 0) + c * k
    return Laurent({(e,): c for e, c in out.items()}, T_NAMES)


def morton_cromwell_values(p: Laurent, ts=(Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))) -> dict:
    """Coefficients in z of P(i t, i z) at the sample values of t."""
    out = {}
    for t in ts:
        coeffs: dict[int, Fraction] = {}
        for (a, b), c in p.terms.items():
            unit = _sgn((a + b) // 2)
            coeffs[b] = coeffs.get(b, Fraction(0)) + unit * c * Fraction(t) ** a
        out[t] = {b: v for b, v in sorted(coeffs.items()) if v}
    return out


# ---------------------------------------------------------------- Alexander

def _bareiss(mat: list[list[int]]) -> int:
    n = len(mat)
    if n == 0:
        return 1
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _interpolate(points: list[tuple[int, int]]) -> dict[int, int]:
    """Integer polynomial through the given points (Newton form)."""
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            new[k + 1] += poly[k]
        for k in range(n):
            new[k] -= xs[i] * poly[k]
        new[0] += coef[i]
        poly = new
    out = {}
    for k, v in enumerate(poly):
        if v:
            if v.denominator != 1:
                raise ArithmeticError("non-integral interpolation")
            out[k] = int(v)
    return out


def _normalize_alexander(coeffs: dict[int, int]) -> Laurent:
    if not coeffs:
        return Laurent({}, T_NAMES)
    lo, hi = min(coeffs), max(coeffs)
    centre = lo + hi
    sign = 1 if sum(coeffs.values()) > 0 else -1
    # half units: exponent e becomes 2e - (lo + hi)
    return Laurent({(2 * e - centre,): sign * c for e, c in coeffs.items()}, T_NAMES)


def alexander_fox(pd: PlanarDiagram) -> Laurent:
    """Alexander polynomial of a knot from a Wirtinger minor, normalized with
    Delta(t) = Delta(1/t) and Delta(1) = 1."""
    if pd.component_count != 1:
        raise ValueError("alexander_fox handles knots only")
    if pd.c == 0:
        return Laurent.const(1, T_NAMES)
    parent = {e: e for x in pd.crossings for e in x.arcs}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in pd.crossings:
        ra, rb = find(x.b), find(x.d)
        if ra != rb:
            parent[ra] = rb
    gens = sorted({find(e) for e in parent})
    col = {g: k for k, g in enumerate(gens)}
    n = pd.c
    if len(gens) != n:
        raise ArithmeticError("Wirtinger arc count differs from crossing count")

    def matrix_at(t: int) -> list[list[int]]:
        rows = []
        for x in pd.crossings:
            row = [0] * n
            o = col[find(x.b)]
            i, j = col[find(x.a)], col[find(x.c)]
            row[o] += 1 - t
            if x.sign > 0:
                row[i] += t
                row[j] -= 1
            else:
                row[j] += t
                row[i] -= 1
            rows.append(row)
        return [r[1:] for r in rows[1:]]

    points = [(t, _bareiss(matrix_at(t))) for t in range(2, n + 2)]
    return _normalize_alexander(_interpolate(points))


def conway_alexander(pd: PlanarDiagram, memo: SkeinMemo | None = None) -> dict:
    """Conway polynomial by skein, Alexander by substitution, plus flags."""
    nabla = conway_skein(pd, memo=memo)
    delta = conway_to_alexander(nabla)
    if delta:
        lo, hi = delta.degrees()
        lead = delta.coeff(hi)
        max_deg = Fraction(hi, 2)
        monic = abs(lead) == 1
    else:
        max_deg, monic = None, False
    return {
        "conway": nabla,
        "alexander": delta,
        "maxDegAlexander": max_deg,
        "monic": monic,
        "conwayNonnegative": all(c >= 0 for c in nabla.terms.values()),
    }


# ---------------------------------------------------------------- derived data

def _derivative_at_one(v: Laurent, k: int) -> Fraction:
    total = Fraction(0)
    for (e,), c in v.terms.items():
        x = Fraction(e, 2)
        f = Fraction(1)
        for j in range(k):
            f *= x - j
        total += c * f
    return total


def poly_derived_invariants(V: Laurent, P: Laurent | None = None, nabla: Laurent | None = None) -> dict:
    """v2, v3 from derivatives of V at t = 1, plus degree data."""
    d2 = _derivative_at_one(V, 2)
    d3 = _derivative_at_one(V, 3)
    v2 = -d2 / 6
    v3 = -d2 / 3 - d3 / 9
    if v2.denominator != 1 or v3.denominator != 1:
        raise ArithmeticError(f"non-integral derivative data v2={v2} v3={v3}")
    lo, hi = V.degrees()
    out = {
        "v2": int(v2),
        "v3": int(v3),
        "minDegV": Fraction(lo, 2),
        "maxDegV": Fraction(hi, 2),
        "spanV": Fraction(hi - lo, 2),
        "minCfV": V.coeff(lo),
        "maxCfV": V.coeff(hi),
    }
    if P is not None and P:
        out["maxDegmP"] = P.degrees(1)[1]
        out["minDeglP"] = P.degrees(0)[0]
        out["maxDeglP"] = P.degrees(0)[1]
    if nabla is not None:
        out["conwayZ2"] = nabla.coeff(2)
        delta = conway_to_alexander(nabla)
        out["alexanderSecondDerivative"] = _derivative_at_one(delta, 2)
    return out


# ---------------------------------------------------------------- Seifert matrix

def braid_seifert_matrix(b: BraidWord) -> list[list[int]]:
    """Seifert matrix of the canonical surface of a closed braid.

    The surface is n stacked disks joined by a twisted band per letter.  The
    basis loops run through consecutive bands on the same generator.
    """
    loops: list[tuple[int, int, int]] = []  # (generator, first letter, next letter)
    for gen in range(1, b.n):
        where = [p for p, k in enumerate(b.letters) if abs(k) == gen]
        for p, q in zip(where, where[1:]):
            loops.append((gen, p, q))
    size = len(loops)
    sgn = [1 if k > 0 else -1 for k in b.letters]
    v = [[0] * size for _ in range(size)]
    for a, (g, p, q) in enumerate(loops):
        v[a][a] = -(sgn[p] + sgn[q]) // 2
    for a, (g1, p1, q1) in enumerate(loops):
        for c, (g2, p2, q2) in enumerate(loops):
            if a == c:
                continue
            if g1 == g2 and q1 == p2:
                e = sgn[q1]
                v[a][c] = (1 + e) // 2
                v[c][a] = -(1 - e) // 2
            elif g2 == g1 + 1 and p1 < p2 < q1 < q2:
                v[a][c] = -1
            elif g2 == g1 + 1 and p2 < p1 < q2 < q1:
                v[a][c] = 1
    return v


def signature_of(sym: list[list[int]]) -> int:
    """Signature of a symmetric integer matrix by exact congruence reduction."""
    a = [[Fraction(x) for x in row] for row in sym]
    n = len(a)
    sig = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes the diagonal 2 a_ij nonzero
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        sig += 1 if d > 0 else -1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / d
            if f:
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
        for i in active:
            a[piv][i] = a[i][piv] = Fraction(0)
    return sig


def _det_poly_matrix(v: list[list[int]]) -> dict[int, int]:
    """det(V - t V^T) as a polynomial in t."""
    n = len(v)
    pts = []
    for t in range(1, n + 2):
        pts.append((t, _bareiss([[v[i][j] - t * v[j][i] for j in range(n)] for i in range(n)])))
    return _interpolate(pts)


def seifert_signature(pd: PlanarDiagram) -> dict:
    """Seifert matrix of the braided diagram, signature with the positive
    trefoil at +2, and the Alexander polynomial det(V - t V^T)."""
    from .surfaces_braids import vogel_braiding

    if pd.component_count != 1:
        raise ValueError("seifert_signature handles knots only")
    braid = vogel_braiding(pd)["braid"]
    v = braid_seifert_matrix(braid)
    sym = [[v[i][j] + v[j][i] for j in range(len(v))] for i in range(len(v))]
    sigma = -signature_of(sym)
    alex = _normalize_alexander(_det_poly_matrix(v)) if v else Laurent.const(1, T_NAMES)
    return {"matrix": v, "signature": sigma, "alexanderFromMatrix": alex, "braid": braid}
