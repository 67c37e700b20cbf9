"""Seifert circles and canonical genus, the Bennequin inequality, Vogel's
braiding algorithm, Markov destabilization of positive braids and the
braid-specific bounds."""

from __future__ import annotations

import heapq
from collections import deque

from dataclasses import dataclass
from fractions import Fraction
from graphlib import TopologicalSorter, CycleError

import networkx as nx

from .diagram_model import BraidWord, PlanarDiagram, add_r2, faces

__all__ = [
    "SeifertData", "seifert_decomposition", "bennequin_check", "vogel_braiding",
    "vogel_face", "is_braided", "markov_reduce_positive", "braid_bounds",
    "cubic_bound_data", "BraidingError", "free_reduce",
]


class BraidingError(RuntimeError):
    """Vogel's algorithm did not terminate within its iteration cap."""


@dataclass(frozen=True)
class SeifertData:
    circles: int
    writhe: int
    crossings: int
    components: int

    @property
    def canonical_genus(self) -> Fraction:
        return Fraction(self.crossings - self.circles + self.components, 2)

    def as_dict(self) -> dict:
        g = self.canonical_genus
        return {"n": self.circles, "w": self.writhe, "c": self.crossings,
                "s": self.components, "gCan": int(g) if g.denominator == 1 else str(g)}


def seifert_decomposition(d: PlanarDiagram) -> SeifertData:
    return SeifertData(len(d.seifert_circles()) + d.free_loops, d.writhe, d.c, d.component_count)


def bennequin_check(d: PlanarDiagram, g_bound: int) -> dict:
    """|w| + 1 <= n + 2 g for any upper bound g of the genus."""
    s = seifert_decomposition(d)
    lhs = abs(s.writhe) + 1
    rhs = s.circles + 2 * g_bound
    return {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}


# ---------------------------------------------------------------- Vogel

def _circle_of(pd: PlanarDiagram) -> dict[int, int]:
    return {e: k for k, circ in enumerate(pd.seifert_circles()) for e in circ}


def vogel_face(pd: PlanarDiagram):
    """First face holding two edges of distinct Seifert circles that run
    against each other, as (face, i, j); None when the diagram is braided."""
    circ = _circle_of(pd)
    for face in sorted(faces(pd), key=lambda f: sorted(e for e, _ in f)):
        for i in range(len(face)):
            for j in range(i + 1, len(face)):
                (p, pf), (q, qf) = face[i], face[j]
                if pf == qf and circ[p] != circ[q]:
                    return face, i, j
    return None


def is_braided(pd: PlanarDiagram) -> bool:
    return vogel_face(pd) is None


def _extract_braid(pd: PlanarDiagram) -> BraidWord:
    circles = pd.seifert_circles()
    n = len(circles)
    if n <= 1:
        return BraidWord(1, ())
    circ = {e: k for k, c in enumerate(circles) for e in c}
    g = nx.MultiGraph()
    g.add_nodes_from(range(n))
    for x in pd.crossings:
        g.add_edge(circ[x.under_in], circ[x.over_in])
    simple = nx.Graph(g)
    ends = [v for v in simple if simple.degree(v) == 1]
    if len(ends) != 2 or any(simple.degree(v) > 2 for v in simple):
        raise BraidingError("Seifert graph of a braided diagram must be a path")
    # the path can be read from either end; pick the reading in which the
    # under strand of a positive crossing steps down a level, as in
    # braid_closure
    level = {v: k for k, v in enumerate(nx.shortest_path(simple, ends[0], ends[1]))}
    x = pd.crossings[0]
    if (level[circ[x.under_in]] > level[circ[x.under_out]]) != (x.sign > 0):
        level = {v: n - 1 - k for v, k in level.items()}

    # crossings met along each circle, in the order of its arcs
    at_head: dict[int, int] = {}
    for idx, x in enumerate(pd.crossings):
        at_head[x.under_in] = idx
        at_head[x.over_in] = idx
    seqs: dict[int, list[int]] = {}
    for k, c in enumerate(circles):
        seqs[level[k]] = [at_head[e] for e in c]

    def lower(idx):
        x = pd.crossings[idx]
        return min(level[circ[x.under_in]], level[circ[x.over_in]])

    # cut each circle so that the crossings it shares with the circle below
    # come in the same linear order as on that circle
    cuts = {0: seqs[0]}
    for lv in range(1, n):
        below = [i for i in cuts[lv - 1] if lower(i) == lv - 1]
        seq = seqs[lv]
        for r in range(len(seq)):
            rot = seq[r:] + seq[:r]
            if [i for i in rot if lower(i) == lv - 1] == below:
                cuts[lv] = rot
                break
        else:
            raise BraidingError("inconsistent crossing order between adjacent circles")
    ts = TopologicalSorter()
    for lv, seq in cuts.items():
        for a, b in zip(seq, seq[1:]):
            ts.add(b, a)
        for a in seq:
            ts.add(a)
    try:
        order = list(ts.static_order())
    except CycleError as exc:
        raise BraidingError("no consistent braid word") from exc
    order = _first_reading(order, lower)
    letters = tuple(pd.crossings[i].sign * (lower(i) + 1) for i in order)
    return BraidWord(n, letters)


def _first_reading(order: list[int], lower, cap: int = 400) -> list[int]:
    """Among readings of the closed braid reachable by moving a leading
    letter to the end and commuting distant letters, the one whose crossing
    indices come first lexicographically (searching at most cap readings).
    A closure of a braid word, crossings numbered by letter, reads back as
    that word."""
    lv = {i: lower(i) for i in order}

    def dag(seq):
        last, succ, indeg = {}, {x: [] for x in seq}, {x: 0 for x in seq}
        for x in seq:
            for l in {lv[x] - 1, lv[x], lv[x] + 1}:
                if l in last:
                    succ[last[l]].append(x)
                    indeg[x] += 1
            last[lv[x]] = x
        return succ, indeg

    def normal(seq):
        succ, indeg = dag(seq)
        ready = [x for x in seq if not indeg[x]]
        heapq.heapify(ready)
        out = []
        while ready:
            x = heapq.heappop(ready)
            out.append(x)
            for y in succ[x]:
                indeg[y] -= 1
                if not indeg[y]:
                    heapq.heappush(ready, y)
        return tuple(out)

    start = normal(order)
    seen, queue = {start}, deque([start])
    while queue and len(seen) < cap:
        cur = queue.popleft()
        _, indeg = dag(cur)
        for k, x in enumerate(cur):
            if indeg[x]:
                continue
            nxt = normal(cur[:k] + cur[k + 1:] + (x,))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return list(min(seen))


def vogel_braiding(d: PlanarDiagram, cap: int | None = None) -> dict:
    """Braid a connected diagram by Vogel moves; returns the braid and the
    number of moves used."""
    if d.is_split:
        raise ValueError("vogel_braiding needs a connected diagram")
    if d.c == 0:
        return {"braid": BraidWord(1, ()), "moveCount": 0, "diagram": d}
    cap = cap if cap is not None else 4 * d.c * d.c + 50
    pd = d
    moves = 0
    while True:
        site = vogel_face(pd)
        if site is None:
            break
        if moves >= cap:
            raise BraidingError(f"Vogel moves exceeded cap {cap}")
        face, i, j = site
        pd = add_r2(pd, face, i, j, True)
        moves += 1
    return {"braid": _extract_braid(pd), "moveCount": moves, "diagram": pd}


# ---------------------------------------------------------------- braids

def free_reduce(b: BraidWord) -> BraidWord:
    """Cancel inverse letter pairs, sliding past commuting letters and
    around the closure.  Strand count and exponent sum are unchanged."""
    letters = list(b.letters)
    changed = True
    while changed:
        changed = False
        m = len(letters)
        for i in range(m):
            a = letters[i]
            for step in range(1, m):
                j = (i + step) % m
                c = letters[j]
                if c == -a:
                    # letters strictly between i and j (cyclically) commute with a
                    letters = [x for k, x in enumerate(letters) if k not in (i, j)]
                    changed = True
                    break
                if abs(abs(c) - abs(a)) < 2:
                    break
            if changed:
                break
    return BraidWord(b.n, tuple(letters))


def markov_reduce_positive(b: BraidWord) -> BraidWord:
    """Destabilize generators that occur exactly once, until none is left."""
    if not b.is_positive():
        raise ValueError("markov_reduce_positive needs a positive braid")
    n, letters = b.n, list(b.letters)
    while n > 1:
        counts = {i: 0 for i in range(1, n)}
        for k in letters:
            counts[k] += 1
        once = [i for i, c in counts.items() if c == 1]
        if not once:
            break
        i = once[0]
        # rotate the single sigma_i to the end; the letters below and above i
        # commute, so the rest splits as (low)(high) and the closure is the
        # connected sum of the two halves
        at = letters.index(i)
        rest = letters[at + 1:] + letters[:at]
        letters = [k for k in rest if k < i] + [k - 1 for k in rest if k > i]
        n -= 1
    return BraidWord(n, tuple(letters))


def braid_bounds(b: BraidWord) -> dict:
    """Degree formula for min deg V and the two lower bounds for positive braids."""
    e = b.exponent_sum
    n = b.n
    k = b.closure_components()
    out = {
        "minDegV_formula": Fraction(e + 1 - n, 2),
        "thm4_bound": Fraction(len(b.letters), 4) - Fraction(k - 1, 2),
        "thv2bp_bound": None,
    }
    if n >= 2:
        out["thv2bp_bound"] = Fraction(e * e, 4 * n * (n - 1)) - Fraction((2 * n - 3) * (n - 1), 8)
    return out


def cubic_bound_data(braids) -> list[dict]:
    """([beta], n, v3) triples for positive braids with knot closure; no
    constants are asserted."""
    from .diagram_model import braid_closure, to_gauss
    from .vassiliev import v3_gauss

    rows = []
    for b in braids:
        if b.closure_components() != 1:
            continue
        rows.append({"exponentSum": b.exponent_sum, "n": b.n,
                     "v3": v3_gauss(to_gauss(braid_closure(b)), check=False)})
    return rows
