"""Knot presentations: planar diagrams, DT and Gauss codes, braid words and
rational tangles, with parsers, converters and a realizability test.

Planar diagram convention: each crossing lists its four arc labels
counterclockwise starting at the incoming under-arc.  Arc labels are
1..2c, consecutive along the orientation of each component.  A crossing
is positive when the over strand runs from the fourth slot to the second
one, negative when it runs from the second slot to the fourth one.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import networkx as nx

__all__ = [
    "Crossing", "PlanarDiagram", "BraidWord", "ConwayTangle", "GaussCode",
    "ParseError", "parse_diagram", "serialize", "braid_closure",
    "rational_closure", "pretzel_closure", "tangle_fraction", "connected_sum",
    "dt_to_pd", "gauss_code_to_pd", "pd_to_gauss_code", "to_gauss",
    "is_realizable", "build_diagram", "add_kink", "add_r2", "perturb", "faces",
    "unknot", "KnotTable", "load_fixtures", "load_table",
]


class ParseError(ValueError):
    """Input text does not describe a valid presentation."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at token {position})"
        super().__init__(message)


@dataclass(frozen=True)
class Crossing:
    a: int
    b: int
    c: int
    d: int
    sign: int

    @property
    def arcs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    # incoming / outgoing arcs of both strands
    @property
    def under_in(self) -> int:
        return self.a

    @property
    def under_out(self) -> int:
        return self.c

    @property
    def over_in(self) -> int:
        return self.d if self.sign > 0 else self.b

    @property
    def over_out(self) -> int:
        return self.b if self.sign > 0 else self.d

    def slot_is_outgoing(self, j: int) -> bool:
        if j == 0:
            return False
        if j == 2:
            return True
        return (j == 1) == (self.sign > 0)

    def switched(self) -> "Crossing":
        """The same crossing with over and under exchanged."""
        a, b, c, d = self.arcs
        if self.sign > 0:
            return Crossing(d, a, b, c, -1)
        return Crossing(b, c, d, a, 1)


@dataclass(frozen=True)
class PlanarDiagram:
    """Oriented diagram.  ``free_loops`` counts crossingless components."""

    crossings: tuple[Crossing, ...]
    free_loops: int = 0
    components: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        comps = _validate(self.crossings)
        object.__setattr__(self, "components", comps)

    # basic data
    @property
    def c(self) -> int:
        return len(self.crossings)

    @property
    def component_count(self) -> int:
        return len(self.components) + self.free_loops

    @property
    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)

    def next_arc(self, label: int) -> int:
        for start, length in self.components:
            if start <= label < start + length:
                return start + (label - start + 1) % length
        raise KeyError(label)

    def component_of(self, label: int) -> int:
        for k, (start, length) in enumerate(self.components):
            if start <= label < start + length:
                return k
        raise KeyError(label)

    @property
    def is_split(self) -> bool:
        if self.free_loops and (self.crossings or self.free_loops > 1):
            return True
        if not self.crossings:
            return False
        g = nx.Graph()
        g.add_nodes_from(range(self.c))
        where: dict[int, list[int]] = {}
        for i, x in enumerate(self.crossings):
            for e in x.arcs:
                where.setdefault(e, []).append(i)
        for ends in where.values():
            g.add_edge(ends[0], ends[-1])
        return not nx.is_connected(g)

    def mirror(self) -> "PlanarDiagram":
        return PlanarDiagram(tuple(x.switched() for x in self.crossings), self.free_loops)

    def switch(self, idx: int) -> "PlanarDiagram":
        xs = list(self.crossings)
        xs[idx] = xs[idx].switched()
        return PlanarDiagram(tuple(xs), self.free_loops)

    def smooth(self, idx: int) -> "PlanarDiagram":
        """Orientation-respecting smoothing of crossing ``idx``."""
        x = self.crossings[idx]
        return remove_crossings(self, {idx: ((x.under_in, x.over_out), (x.over_in, x.under_out))})

    def delete(self, idxs: Iterable[int]) -> "PlanarDiagram":
        """Delete crossings by letting both strands pass straight through."""
        spec = {}
        for i in idxs:
            x = self.crossings[i]
            spec[i] = ((x.under_in, x.under_out), (x.over_in, x.over_out))
        return remove_crossings(self, spec)

    def seifert_circles(self) -> list[list[int]]:
        """Arc labels of each Seifert circle (free loops not included)."""
        nxt: dict[int, int] = {}
        for x in self.crossings:
            nxt[x.under_in] = x.over_out
            nxt[x.over_in] = x.under_out
        seen: set[int] = set()
        circles = []
        for start in sorted(nxt):
            if start in seen:
                continue
            cyc = []
            e = start
            while e not in seen:
                seen.add(e)
                cyc.append(e)
                e = nxt[e]
            circles.append(cyc)
        return circles

    def __str__(self):
        return serialize(self)


def _validate(crossings: Sequence[Crossing]) -> tuple[tuple[int, int], ...]:
    nxt: dict[int, int] = {}
    seen_in: set[int] = set()
    count: dict[int, int] = {}
    for x in crossings:
        if x.sign not in (1, -1):
            raise ValueError(f"bad sign {x.sign}")
        for e in x.arcs:
            count[e] = count.get(e, 0) + 1
        for i, o in ((x.under_in, x.under_out), (x.over_in, x.over_out)):
            if i in nxt:
                raise ValueError(f"arc {i} enters two crossings")
            nxt[i] = o
            seen_in.add(i)
    bad = [e for e, k in count.items() if k != 2]
    if bad:
        raise ValueError(f"arc labels appearing other than twice: {sorted(bad)}")
    labels = sorted(count)
    if labels and labels != list(range(1, len(labels) + 1)):
        raise ValueError("arc labels must be 1..2c")
    if len(set(nxt.values())) != len(nxt):
        raise ValueError("an arc leaves two crossings")
    comps = []
    done: set[int] = set()
    for e in labels:
        if e in done:
            continue
        start = e
        cyc = [e]
        done.add(e)
        f = nxt[e]
        while f != start:
            cyc.append(f)
            done.add(f)
            f = nxt[f]
        if cyc != list(range(start, start + len(cyc))):
            raise ValueError("arc labels are not consecutive along the orientation")
        comps.append((start, len(cyc)))
    return tuple(comps)


def unknot() -> PlanarDiagram:
    return PlanarDiagram((), 1)


def build_diagram(raw: Sequence[tuple[Hashable, Hashable, Hashable, Hashable, int]],
                  free_loops: int = 0) -> PlanarDiagram:
    """Relabel crossings given with arbitrary arc keys into a PlanarDiagram.

    Each raw crossing is ``(k0, k1, k2, k3, sign)`` counterclockwise from the
    incoming under-arc.  Components are numbered in order of first appearance.
    """
    nxt: dict = {}
    for k0, k1, k2, k3, s in raw:
        nxt[k0] = k2
        if s > 0:
            nxt[k3] = k1
        else:
            nxt[k1] = k3
    label: dict = {}
    n = 0
    for x in raw:
        for k in x[:4]:
            if k in label:
                continue
            start = k
            while True:
                n += 1
                label[k] = n
                k = nxt[k]
                if k == start:
                    break
    xs = tuple(Crossing(label[k0], label[k1], label[k2], label[k3], s) for k0, k1, k2, k3, s in raw)
    return PlanarDiagram(xs, free_loops)


def remove_crossings(pd: PlanarDiagram, spec: dict[int, tuple[tuple[int, int], tuple[int, int]]]) -> PlanarDiagram:
    """Remove crossings, joining the given (incoming, outgoing) arc pairs."""
    parent = {e: e for x in pd.crossings for e in x.arcs}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for pairs in spec.values():
        for i, o in pairs:
            ri, ro = find(i), find(o)
            if ri != ro:
                parent[ri] = ro
    raw = []
    used = set()
    for idx, x in enumerate(pd.crossings):
        if idx in spec:
            continue
        keys = tuple(find(e) for e in x.arcs)
        used.update(keys)
        raw.append(keys + (x.sign,))
    classes = {find(e) for e in parent}
    loops = len(classes - used)
    return build_diagram(raw, pd.free_loops + loops)


# ---------------------------------------------------------------- faces

def _slots(pd: PlanarDiagram) -> dict[int, list[tuple[int, int]]]:
    where: dict[int, list[tuple[int, int]]] = {}
    for i, x in enumerate(pd.crossings):
        for j, e in enumerate(x.arcs):
            where.setdefault(e, []).append((i, j))
    return where


def faces(pd: PlanarDiagram) -> list[list[tuple[int, bool]]]:
    """Faces of the diagram as cyclic lists of (arc, traversed forward).

    Each face is traced keeping it on the left; an arc traversed forward
    therefore has the face on its left side.
    """
    where = _slots(pd)

    def other(slot):
        a, b = where[pd.crossings[slot[0]].arcs[slot[1]]]
        return b if a == slot else a

    visited: set[tuple[int, int]] = set()
    out = []
    for i in range(pd.c):
        for j in range(4):
            if (i, j) in visited:
                continue
            face = []
            s = (i, j)
            while s not in visited:
                visited.add(s)
                x = pd.crossings[s[0]]
                face.append((x.arcs[s[1]], x.slot_is_outgoing(s[1])))
                t = other(s)
                s = (t[0], (t[1] - 1) % 4)
            out.append(face)
    return out


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("strand count must be positive")
        for k in self.letters:
            if k == 0 or abs(k) >= self.n:
                raise ValueError(f"generator {k} out of range for {self.n} strands")
        object.__setattr__(self, "letters", tuple(self.letters))

    @property
    def exponent_sum(self) -> int:
        return sum(1 if k > 0 else -1 for k in self.letters)

    def permutation(self) -> list[int]:
        perm = list(range(self.n))
        for k in self.letters:
            i = abs(k) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return perm

    def closure_components(self) -> int:
        perm = self.permutation()
        seen = set()
        comps = 0
        for i in range(self.n):
            if i in seen:
                continue
            comps += 1
            while i not in seen:
                seen.add(i)
                i = perm[i]
        return comps

    def is_positive(self) -> bool:
        return all(k > 0 for k in self.letters)


@dataclass(frozen=True)
class ConwayTangle:
    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries or any(a == 0 for a in self.entries):
            raise ValueError("Conway tangle entries must be nonzero and nonempty")
        object.__setattr__(self, "entries", tuple(self.entries))


@dataclass(frozen=True)
class GaussCode:
    """Sequence of (crossing id, 'O' or 'U', sign or None) along the knot."""

    tokens: tuple[tuple[int, str, int | None], ...]

    def __post_init__(self):
        seen: dict[int, dict[str, int | None]] = {}
        for cid, ou, s in self.tokens:
            if ou not in ("O", "U"):
                raise ValueError(f"bad flag {ou}")
            d = seen.setdefault(cid, {})
            if ou in d:
                raise ValueError(f"crossing {cid} has two {ou} passages")
            d[ou] = s
        for cid, d in seen.items():
            if len(d) != 2:
                raise ValueError(f"crossing {cid} must appear once as O and once as U")
            if d["O"] != d["U"]:
                raise ValueError(f"crossing {cid} has inconsistent signs")
        object.__setattr__(self, "tokens", tuple(self.tokens))

    @property
    def signed(self) -> bool:
        return all(s is not None for _, _, s in self.tokens)


INFINITY = "inf"


def tangle_fraction(t: ConwayTangle) -> Fraction | str:
    """a_n + 1/(a_{n-1} + ... + 1/a_1); ``"inf"`` stands for infinity."""
    value: Fraction | str = Fraction(t.entries[0])
    for a in t.entries[1:]:
        if value == INFINITY:
            value = Fraction(a)
        elif value == 0:
            value = INFINITY
        else:
            value = a + 1 / value
    return value


# ---------------------------------------------------------------- unoriented builder

class _Tangle:
    """Unoriented 4-ended tangle: crossings hold 4 port ids counterclockwise
    and the index pair (0 or 1) of the over strand; edges join ports, inner
    joint nodes, or the boundary names NW, NE, SW, SE."""

    def __init__(self):
        self.crossings: list[tuple[list[int], int]] = []
        self.edges: list[list] = []
        self._next = 0

    def fresh(self) -> int:
        self._next += 1
        return self._next

    def rename(self, old, new):
        for e in self.edges:
            for k in (0, 1):
                if e[k] == old:
                    e[k] = new

    @classmethod
    def zero(cls) -> "_Tangle":
        t = cls()
        t.edges = [["NW", "NE"], ["SW", "SE"]]
        return t

    def add_crossing_right(self, sign: int):
        ne, nw, sw, se = (self.fresh() for _ in range(4))
        self.crossings.append(([ne, nw, sw, se], 0 if sign > 0 else 1))
        self.rename("NE", ("j", nw))
        self.rename("SE", ("j", sw))
        self.edges += [[("j", nw), nw], [("j", sw), sw], [ne, "NE"], [se, "SE"]]

    def reflect(self):
        # reversing the port order moves the over pair to the other parity
        self.crossings = [(ports[::-1], 1 - over) for ports, over in self.crossings]
        self.rename("NE", "tmp")
        self.rename("SW", "NE")
        self.rename("tmp", "SW")

    def absorb(self, other: "_Tangle", joins: dict, renames: dict):
        """Merge ``other`` after renaming its boundary names."""
        shift = self._next
        for ports, over in other.crossings:
            self.crossings.append(([p + shift for p in ports], over))
        for e in other.edges:
            ne = []
            for v in e:
                if isinstance(v, int):
                    ne.append(v + shift)
                elif isinstance(v, tuple):
                    ne.append((v[0], v[1] + shift) if v[0] == "j" else v)
                else:
                    ne.append(renames.get(v, v))
            self.edges.append(ne)
        self._next += other._next
        for old, new in joins.items():
            self.rename(old, new)

    def plus(self, other: "_Tangle"):
        """Horizontal sum: this tangle on the left, ``other`` on the right."""
        j1, j2 = ("k", self.fresh()), ("k", self.fresh())
        self.rename("NE", j1)
        self.rename("SE", j2)
        self.absorb(other, {}, {"NW": j1, "SW": j2})

    def stack(self, other: "_Tangle"):
        """Vertical product: ``other`` placed on top of this tangle."""
        j1, j2 = ("k", self.fresh()), ("k", self.fresh())
        self.rename("NW", j1)
        self.rename("NE", j2)
        self.absorb(other, {}, {"SW": j1, "SE": j2})

    def numerator(self):
        self.rename("NW", ("k", -1))
        self.rename("NE", ("k", -1))
        self.rename("SW", ("k", -2))
        self.rename("SE", ("k", -2))

    def to_diagram(self) -> PlanarDiagram:
        return _orient(self.crossings, self.edges)


def _orient(crossings: list[tuple[list, int]], edges: list) -> PlanarDiagram:
    """Orient an unoriented 4-valent diagram and produce a PlanarDiagram."""
    adj: dict = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    port_owner = {}
    for ci, (ports, over) in enumerate(crossings):
        for j, p in enumerate(ports):
            port_owner[p] = (ci, j)

    def walk(p):
        prev, cur = p, adj[p][0]
        while cur not in port_owner:
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        return cur

    partner = {p: walk(p) for p in port_owner}
    direction: dict = {}  # port -> 'in' or 'out'
    arc_key: dict = {}
    key = 0
    for ci, (ports, over) in enumerate(crossings):
        for p in ports:
            if p in direction:
                continue
            # start a component entering through p
            cur = p
            while cur not in direction:
                cc, j = port_owner[cur]
                direction[cur] = "in"
                out_port = crossings[cc][0][(j + 2) % 4]
                direction[out_port] = "out"
                key += 1
                nxt = partner[out_port]
                arc_key[out_port] = key
                arc_key[nxt] = key
                cur = nxt
    raw = []
    for ports, over in crossings:
        under = 1 - over
        u_pair = (ports[under], ports[under + 2])
        start = 0
        for j in range(4):
            if ports[j] in u_pair and direction[ports[j]] == "in":
                start = j
        rot = [ports[(start + k) % 4] for k in range(4)]
        sign = 1 if direction[rot[1]] == "out" else -1
        raw.append(tuple(arc_key[p] for p in rot) + (sign,))
    # crossingless closed chains of joints
    loops = 0
    seen = set()
    for v in adj:
        if v in port_owner or v in seen:
            continue
        comp = [v]
        seen.add(v)
        has_port = False
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in port_owner:
                    has_port = True
                elif w not in seen:
                    seen.add(w)
                    stack.append(w)
        if not has_port:
            loops += 1
    return build_diagram(raw, loops)


def _twist_tangle(a: int) -> _Tangle:
    t = _Tangle.zero()
    s = 1 if a > 0 else -1
    for _ in range(abs(a)):
        t.add_crossing_right(s)
    return t


def _rational_tangle(entries: Sequence[int]) -> _Tangle:
    t = _twist_tangle(entries[0])
    for a in entries[1:]:
        t.reflect()
        s = 1 if a > 0 else -1
        for _ in range(abs(a)):
            t.add_crossing_right(s)
    return t


def rational_closure(t: ConwayTangle) -> PlanarDiagram:
    """Numerator closure of the rational tangle with the given Conway notation."""
    tangle = _rational_tangle(t.entries)
    tangle.numerator()
    return tangle.to_diagram()


def pretzel_closure(entries: Sequence[int]) -> PlanarDiagram:
    """Pretzel diagram P(a_1, ..., a_n): vertical twist columns side by side."""
    total = None
    for a in entries:
        col = _twist_tangle(a)
        col.reflect()
        if total is None:
            total = col
        else:
            total.plus(col)
    total.numerator()
    return total.to_diagram()


# ---------------------------------------------------------------- braids

def braid_closure(b: BraidWord) -> PlanarDiagram:
    """Closed braid diagram; a positive letter gives a positive crossing."""
    current = {p: ("s", p) for p in range(1, b.n + 1)}
    touched = set()
    raw = []
    for idx, k in enumerate(b.letters):
        i = abs(k)
        left_in, right_in = current[i], current[i + 1]
        left_out, right_out = ("x", idx, "l"), ("x", idx, "r")
        # the strand from position i leaves to i+1 and vice versa
        if k > 0:
            raw.append([right_in, left_out, right_out, left_in, 1])
        else:
            raw.append([left_in, right_in, left_out, right_out, -1])
        current[i], current[i + 1] = right_out, left_out
        touched.update((i, i + 1))
    closing = {current[p]: ("s", p) for p in touched}
    fixed = [tuple(closing.get(k, k) for k in x[:4]) + (x[4],) for x in raw]
    return build_diagram(fixed, b.n - len(touched))


# ---------------------------------------------------------------- Gauss codes

def gauss_code_to_pd(g: GaussCode) -> PlanarDiagram:
    """Diagram with the rotation system forced by the signs (may be non-planar)."""
    if not g.signed:
        raise ValueError("unsigned Gauss code; use is_realizable or dt_to_pd")
    m = len(g.tokens)
    if m == 0:
        return unknot()
    pos: dict[int, dict[str, int]] = {}
    sign: dict[int, int] = {}
    for i, (cid, ou, s) in enumerate(g.tokens):
        pos.setdefault(cid, {})[ou] = i
        sign[cid] = s
    raw = []
    for cid in sorted(pos):
        u, o = pos[cid]["U"], pos[cid]["O"]
        u_in, o_in = (u - 1) % m, (o - 1) % m
        if sign[cid] > 0:
            raw.append((u_in, o, u, o_in, 1))
        else:
            raw.append((u_in, o_in, u, o, -1))
    return build_diagram(raw)


def pd_to_gauss_code(pd: PlanarDiagram) -> GaussCode:
    if len(pd.components) + pd.free_loops != 1:
        raise ValueError("Gauss codes describe knots only")
    enter = {}
    for i, x in enumerate(pd.crossings):
        enter[x.under_in] = (i + 1, "U", x.sign)
        enter[x.over_in] = (i + 1, "O", x.sign)
    return GaussCode(tuple(enter[e] for e in range(1, 2 * pd.c + 1)))


def to_gauss(pd: PlanarDiagram):
    """Gauss diagram of a knot diagram: arrows from under to over passage."""
    from .gauss_engine import GaussDiagram

    if pd.component_count != 1:
        raise ValueError("to_gauss needs a one-component diagram")
    return GaussDiagram.from_code(pd_to_gauss_code(pd))


def _face_count(pd: PlanarDiagram) -> int:
    return len(faces(pd))


def _gadget_embedding(g: GaussCode) -> dict[int, int] | None:
    """Signs of a planar realization of an unsigned code, or None if none exists.

    Every crossing becomes a rigid wheel so that strands must pass straight
    through; a planar embedding of the whole graph then fixes the rotations.
    """
    m = len(g.tokens)
    graph = nx.Graph()
    first: dict[int, int] = {}
    corner_in: dict[int, tuple] = {}
    corner_out: dict[int, tuple] = {}
    for i, (cid, ou, _) in enumerate(g.tokens):
        if cid not in first:
            first[cid] = i
            hub = ("h", cid)
            for j in range(4):
                graph.add_edge(hub, ("p", cid, j))
                graph.add_edge(("p", cid, j), ("p", cid, (j + 1) % 4))
            corner_in[i], corner_out[i] = ("p", cid, 0), ("p", cid, 2)
        else:
            corner_in[i], corner_out[i] = ("p", cid, 1), ("p", cid, 3)
    for i in range(m):
        mid = ("m", i)
        graph.add_edge(corner_out[i], mid)
        graph.add_edge(mid, corner_in[(i + 1) % m])
    ok, emb = nx.check_planarity(graph)
    if not ok:
        return None
    signs = {}
    for cid, i in first.items():
        cw = list(emb.neighbors_cw_order(("h", cid)))
        ccw = cw[::-1]
        k = ccw.index(("p", cid, 0))
        ccw_forward = ccw[(k + 1) % 4] == ("p", cid, 1)
        first_is_under = g.tokens[i][1] == "U"
        s = -1 if first_is_under else 1
        signs[cid] = s if ccw_forward else -s
    return signs


def is_realizable(g: GaussCode) -> bool:
    """Whether some knot diagram has Gauss code ``g``.

    Signed codes fix the rotation at every crossing and are planar exactly
    when the traced faces number c + 2.  Unsigned codes are embedded through
    rigid crossing gadgets.  Both structural lemmas run first as filters.
    """
    from .gauss_engine import GaussDiagram, structural_checks

    if not g.tokens:
        return True
    gd = GaussDiagram.from_code(g, allow_unsigned=True)
    checks = structural_checks(gd)
    if not (checks["evenValence"] and checks["doubleConnectivity"]):
        return False
    if g.signed:
        pd = gauss_code_to_pd(g)
        return _face_count(pd) == pd.c + 2
    return _gadget_embedding(g) is not None


def dt_to_pd(codes: Sequence[int]) -> PlanarDiagram:
    """Knot diagram from a DT code.

    A positive even entry means the even passage is an under-passage.  The
    planar realization is unique up to reflection; we take the one in which
    the crossing through passage 1 is negative.
    """
    c = len(codes)
    if c == 0:
        return unknot()
    evens = [abs(e) for e in codes]
    if sorted(evens) != list(range(2, 2 * c + 1, 2)):
        raise ParseError("DT sequence is not a permutation of the even numbers 2..2c")
    tokens: list = [None] * (2 * c)
    for k, e in enumerate(codes):
        odd = 2 * k + 1
        even = abs(e)
        even_under = e > 0
        tokens[odd - 1] = (k + 1, "O" if even_under else "U", None)
        tokens[even - 1] = (k + 1, "U" if even_under else "O", None)
    g = GaussCode(tuple(tokens))
    signs = _gadget_embedding(g)
    if signs is None:
        raise ParseError("DT code is not realizable")
    if signs[1] > 0:
        signs = {k: -s for k, s in signs.items()}
    signed = GaussCode(tuple((cid, ou, signs[cid]) for cid, ou, _ in tokens))
    pd = gauss_code_to_pd(signed)
    assert _face_count(pd) == pd.c + 2
    return pd


# ---------------------------------------------------------------- sums and moves

def connected_sum(d1: PlanarDiagram, d2: PlanarDiagram) -> PlanarDiagram:
    """Band the first arc of ``d1`` to the first arc of ``d2``."""
    if not d1.crossings:
        return d2 if d1.free_loops <= 1 else PlanarDiagram(d2.crossings, d2.free_loops + d1.free_loops - 1)
    if not d2.crossings:
        return PlanarDiagram(d1.crossings, d1.free_loops + max(d2.free_loops - 1, 0))

    def raw_of(pd, tag):
        return [[(tag, e) for e in x.arcs] + [x.sign] for x in pd.crossings]

    r1, r2 = raw_of(d1, "L"), raw_of(d2, "R")

    def head_slot(pd, e):
        for i, x in enumerate(pd.crossings):
            for j, f in enumerate(x.arcs):
                if f == e and not x.slot_is_outgoing(j):
                    return i, j
        raise KeyError(e)

    i1, j1 = head_slot(d1, 1)
    i2, j2 = head_slot(d2, 1)
    r1[i1][j1] = ("R", 1)
    r2[i2][j2] = ("L", 1)
    raw = [tuple(x) for x in r1 + r2]
    return build_diagram(raw, d1.free_loops + d2.free_loops)


def add_kink(pd: PlanarDiagram, arc: int, first_under: bool, left: bool) -> PlanarDiagram:
    """Insert a Reidemeister I curl on ``arc``."""
    if not pd.crossings:
        raw = [_kink_raw("e", "e", "l", first_under, left)]
        return build_diagram(raw, pd.free_loops - 1)
    raw = [list(x.arcs) + [x.sign] for x in pd.crossings]
    # the kink sits at the head end of the arc
    for i, x in enumerate(pd.crossings):
        for j, e in enumerate(x.arcs):
            if e == arc and not x.slot_is_outgoing(j):
                raw[i][j] = ("out", arc)
    raw.append(list(_kink_raw(arc, ("out", arc), ("loop", arc), first_under, left)))
    return build_diagram([tuple(r) for r in raw], pd.free_loops)


def _kink_raw(e_in, e_out, loop, first_under, left):
    if left:
        return (e_in, e_out, loop, loop, 1) if first_under else (loop, e_in, e_out, loop, -1)
    return (e_in, loop, loop, e_out, -1) if first_under else (loop, loop, e_out, e_in, 1)


def add_r2(pd: PlanarDiagram, face: list[tuple[int, bool]], i: int, j: int, p_over: bool = True) -> PlanarDiagram:
    """Push boundary edge ``i`` of ``face`` across it over (or under) edge ``j``."""
    p, pf = face[i]
    q, qf = face[j]
    if p == q:
        raise ValueError("R2 needs two distinct arcs")
    if pf != qf and not pf:
        # parallel case is written for p with the face on its left
        p, pf, q, qf = q, qf, p, pf
    pa, pb, pc = ("pa", p), ("pb", p), ("pc", p)
    qa, qb, qc = ("qa", q), ("qb", q), ("qc", q)
    if pf == qf:
        # antiparallel; along q the second crossing comes first
        x1 = [qb, pb, qc, pa, 1]
        x2 = [qa, pb, qb, pc, -1]
        if not pf:
            x1 = [qb, pa, qc, pb, -1]
            x2 = [qa, pc, qb, pb, 1]
    else:
        x1 = [qa, pa, qb, pb, -1]
        x2 = [qb, pc, qc, pb, 1]
    new = [x1, x2]
    if not p_over:
        new = [_switch_raw(x) for x in new]
    raw = []
    for x in pd.crossings:
        r = list(x.arcs) + [x.sign]
        for k, e in enumerate(x.arcs):
            out = x.slot_is_outgoing(k)
            if e == p:
                r[k] = pa if out else pc
            elif e == q:
                r[k] = qa if out else qc
        raw.append(tuple(r))
    raw += [tuple(x) for x in new]
    return build_diagram(raw, pd.free_loops)


def _switch_raw(x):
    a, b, c, d, s = x
    if s > 0:
        return [d, a, b, c, -1]
    return [b, c, d, a, 1]


def perturb(pd: PlanarDiagram, rng: random.Random, moves: int = 2) -> PlanarDiagram:
    """Apply random Reidemeister I and II insertions."""
    for _ in range(moves):
        if not pd.crossings or rng.random() < 0.4:
            arc = rng.randint(1, max(2 * pd.c, 1))
            pd = add_kink(pd, arc, rng.random() < 0.5, rng.random() < 0.5)
            continue
        fs = [f for f in faces(pd) if len({e for e, _ in f}) > 1]
        if not fs:
            continue
        f = rng.choice(fs)
        i, j = rng.sample(range(len(f)), 2)
        if f[i][0] == f[j][0]:
            continue
        pd = add_r2(pd, f, i, j, rng.random() < 0.5)
    return pd


# ---------------------------------------------------------------- parsing

_INT = re.compile(r"^[+-]?\d+$")


def _ints(tokens: list[str], offset: int = 0) -> list[int]:
    out = []
    for k, tok in enumerate(tokens):
        if not _INT.match(tok):
            raise ParseError(f"expected an integer, got {tok!r}", offset + k)
        out.append(int(tok))
    return out


def _parse_pd(text: str) -> PlanarDiagram:
    tokens = re.sub(r"PD|[\[\](),;]", " ", text).split()
    raw = []
    k = 0
    while k < len(tokens):
        if tokens[k] not in ("X", "x"):
            raise ParseError(f"expected X, got {tokens[k]!r}", k)
        arcs = _ints(tokens[k + 1:k + 5], k + 1)
        if len(arcs) != 4:
            raise ParseError("crossing needs four arc labels", k)
        k += 5
        sign = None
        if k < len(tokens) and tokens[k] in ("+", "-"):
            sign = 1 if tokens[k] == "+" else -1
            k += 1
        raw.append((arcs, sign))
    count: dict[int, int] = {}
    for arcs, _ in raw:
        for e in arcs:
            count[e] = count.get(e, 0) + 1
    bad = sorted(e for e, v in count.items() if v != 2)
    if bad:
        raise ParseError(f"arc labels appearing other than twice: {bad}")
    xs = []
    for arcs, sign in raw:
        i, j, kk, l = arcs
        if sign is None:
            # label-order rule for the over strand
            sign = 1 if (i == j or kk == l or j == l + 1 or l > j + 1) else -1
        xs.append(Crossing(i, j, kk, l, sign))
    if not xs:
        return unknot()
    try:
        return PlanarDiagram(tuple(xs))
    except ValueError as err:
        raise ParseError(str(err)) from None


def _parse_gauss(text: str) -> GaussCode:
    tokens = text.replace(",", " ").split()
    out = []
    for k, tok in enumerate(tokens):
        m = re.fullmatch(r"([OUou])(\d+)([+-]?)", tok)
        if not m:
            raise ParseError(f"bad Gauss token {tok!r}", k)
        sign = {"+": 1, "-": -1, "": None}[m.group(3)]
        out.append((int(m.group(2)), m.group(1).upper(), sign))
    try:
        return GaussCode(tuple(out))
    except ValueError as err:
        raise ParseError(str(err)) from None


def _parse_braid(text: str) -> BraidWord:
    if ":" not in text:
        raise ParseError("braid needs 'n: letters'")
    head, _, body = text.partition(":")
    n = _ints(head.split())
    if len(n) != 1:
        raise ParseError("strand count must be a single integer", 0)
    letters = _ints(body.split(), 1)
    try:
        return BraidWord(n[0], tuple(letters))
    except ValueError as err:
        raise ParseError(str(err)) from None


def _parse_conway(text: str) -> ConwayTangle:
    body = text.split(":", 1)[1] if ":" in text else text
    entries = _ints(body.split(), 1)
    try:
        return ConwayTangle(tuple(entries))
    except ValueError as err:
        raise ParseError(str(err)) from None


def parse_diagram(fmt: str, text: str):
    """Parse one presentation.  PD and DT inputs give a PlanarDiagram."""
    fmt = fmt.upper()
    text = text.split("#", 1)[0].strip()
    if fmt == "PD":
        return _parse_pd(text)
    if fmt == "DT":
        return dt_to_pd(_ints(text.split()))
    if fmt == "GAUSS":
        return _parse_gauss(text)
    if fmt == "BRAID":
        return _parse_braid(text)
    if fmt == "CONWAY":
        return _parse_conway(text)
    raise ParseError(f"unknown format {fmt}")


def serialize(value) -> str:
    if isinstance(value, PlanarDiagram):
        if not value.crossings:
            return ""
        return " ".join(f"X {x.a} {x.b} {x.c} {x.d} {'+' if x.sign > 0 else '-'}" for x in value.crossings)
    if isinstance(value, BraidWord):
        return f"{value.n}: " + " ".join(str(k) for k in value.letters)
    if isinstance(value, ConwayTangle):
        return "C: " + " ".join(str(a) for a in value.entries)
    if isinstance(value, GaussCode):
        return " ".join(f"{ou}{cid}{'' if s is None else ('+' if s > 0 else '-')}" for cid, ou, s in value.tokens)
    raise TypeError(type(value))


def to_diagram(value) -> PlanarDiagram:
    """Coerce any parsed presentation into a PlanarDiagram."""
    if isinstance(value, PlanarDiagram):
        return value
    if isinstance(value, BraidWord):
        return braid_closure(value)
    if isinstance(value, ConwayTangle):
        return rational_closure(value)
    if isinstance(value, GaussCode):
        if not value.signed:
            signs = _gadget_embedding(value)
            if signs is None:
                raise ValueError("Gauss code is not realizable")
            value = GaussCode(tuple((c, ou, signs[c]) for c, ou, _ in value.tokens))
        if not is_realizable(value):
            raise ValueError("Gauss code is not realizable")
        return gauss_code_to_pd(value)
    raise TypeError(type(value))


# ---------------------------------------------------------------- named knots

class KnotTable(dict):
    """Named knot diagrams; ``!name`` looks up the mirror of ``name``."""

    def __missing__(self, key):
        if isinstance(key, str) and key.startswith("!") and key[1:] in self:
            return self[key[1:]].mirror()
        raise KeyError(key)

    def __contains__(self, key):
        if dict.__contains__(self, key):
            return True
        return isinstance(key, str) and key.startswith("!") and dict.__contains__(self, key[1:])


def _name_and_rest(line: str, lineno: int) -> tuple[str, str]:
    parts = line.split(None, 1)
    if len(parts) != 2:
        raise ParseError(f"line {lineno}: expected a name followed by a presentation")
    return parts[0], parts[1]


def load_fixtures(path=None) -> KnotTable:
    """The shipped fixture knots (or another file in the same format)."""
    from importlib.resources import files

    text = (files("knotpos") / "data" / "fixtures.txt").read_text() if path is None else open(path).read()
    table = KnotTable()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, rest = _name_and_rest(line, lineno)
        fmt, _, body = rest.partition(" ")
        table[name] = to_diagram(parse_diagram(fmt, body))
    return table


def load_table(path) -> KnotTable:
    """External knot table with lines ``name dt1 dt2 ...``; a ``!`` before
    the name stores the mirror image under the plain name's mirror."""
    table = KnotTable()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name, rest = _name_and_rest(line, lineno)
            d = parse_diagram("DT", rest)
            if name.startswith("!"):
                table[name[1:]] = d.mirror()
            else:
                table[name] = d
    return table
