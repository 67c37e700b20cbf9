"""Gauss-diagram combinatorics: intersection graph, structural lemmas,
reduction status and loop-minimality."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

__all__ = [
    "GaussDiagram", "intersection_graph", "structural_checks",
    "reduction_status", "second_move_sites", "composite_cut",
    "has_51_pattern",
]


@dataclass(frozen=True)
class GaussDiagram:
    """Circle with directed chords.  ``under[i]``/``over[i]`` are positions in
    0..2c-1 of the tail (under passage) and head (over passage) of arrow
    ``ids[i]``.  ``basepoint`` is the gap before that position."""

    ids: tuple[int, ...]
    under: tuple[int, ...]
    over: tuple[int, ...]
    writhe: tuple[int, ...]
    basepoint: int = 0

    def __post_init__(self):
        pos = sorted(self.under + self.over)
        if pos != list(range(2 * len(self.ids))):
            raise ValueError("chord endpoints must form a perfect matching of 0..2c-1")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate arrow ids")

    @property
    def c(self) -> int:
        return len(self.ids)

    @classmethod
    def from_code(cls, code, allow_unsigned: bool = False) -> "GaussDiagram":
        under: dict[int, int] = {}
        over: dict[int, int] = {}
        sign: dict[int, int] = {}
        for i, (cid, ou, s) in enumerate(code.tokens):
            (under if ou == "U" else over)[cid] = i
            if s is None and not allow_unsigned:
                raise ValueError("unsigned Gauss code")
            sign[cid] = s if s is not None else 1
        ids = tuple(sorted(under))
        return cls(ids, tuple(under[i] for i in ids), tuple(over[i] for i in ids),
                   tuple(sign[i] for i in ids))

    @classmethod
    def from_tokens(cls, tokens: Sequence[tuple[int, str]], writhe: dict[int, int]) -> "GaussDiagram":
        under, over = {}, {}
        for i, (cid, ou) in enumerate(tokens):
            (under if ou == "U" else over)[cid] = i
        ids = tuple(sorted(under))
        return cls(ids, tuple(under[i] for i in ids), tuple(over[i] for i in ids),
                   tuple(writhe[i] for i in ids))

    def tokens(self) -> list[tuple[int, str]]:
        seq: list = [None] * (2 * self.c)
        for k, cid in enumerate(self.ids):
            seq[self.under[k]] = (cid, "U")
            seq[self.over[k]] = (cid, "O")
        return seq

    def writhe_of(self) -> dict[int, int]:
        return dict(zip(self.ids, self.writhe))

    def to_code(self):
        from .diagram_model import GaussCode

        w = self.writhe_of()
        return GaussCode(tuple((cid, ou, w[cid]) for cid, ou in self.tokens()))

    def with_basepoint(self, b: int) -> "GaussDiagram":
        return GaussDiagram(self.ids, self.under, self.over, self.writhe, b % max(2 * self.c, 1))

    def rebased(self) -> "GaussDiagram":
        """Rotate positions so that the basepoint becomes position 0."""
        m = 2 * self.c
        if m == 0 or self.basepoint == 0:
            return self
        b = self.basepoint
        return GaussDiagram(self.ids, tuple((p - b) % m for p in self.under),
                            tuple((p - b) % m for p in self.over), self.writhe, 0)

    def delete(self, drop: Iterable[int]) -> "GaussDiagram":
        drop = set(drop)
        toks = [t for t in self.tokens() if t[0] not in drop]
        w = self.writhe_of()
        return GaussDiagram.from_tokens(toks, w)

    def mirror(self) -> "GaussDiagram":
        """Switch every crossing: arrows reverse and signs flip."""
        return GaussDiagram(self.ids, self.over, self.under, tuple(-w for w in self.writhe), self.basepoint)

    def chord(self, k: int) -> tuple[int, int]:
        a, b = self.under[k], self.over[k]
        return (a, b) if a < b else (b, a)

    def linked(self, i: int, j: int) -> bool:
        lo, hi = self.chord(i)
        a, b = self.chord(j)
        return (lo < a < hi) != (lo < b < hi)

    def linked_matrix(self) -> list[list[bool]]:
        c = self.c
        m = [[False] * c for _ in range(c)]
        for i, j in combinations(range(c), 2):
            if self.linked(i, j):
                m[i][j] = m[j][i] = True
        return m

    def head_side(self, k: int, of: int) -> bool:
        """Whether the head of arrow ``k`` lies inside the interval of chord ``of``."""
        lo, hi = self.chord(of)
        return lo < self.over[k] < hi


def intersection_graph(g: GaussDiagram) -> dict:
    """Linked pairs (as arrow-id pairs), lk(D) and per-arrow degrees l_i."""
    m = g.linked_matrix()
    edges = [(g.ids[i], g.ids[j]) for i, j in combinations(range(g.c), 2) if m[i][j]]
    degrees = {g.ids[i]: sum(m[i]) for i in range(g.c)}
    return {"vertices": list(g.ids), "edges": edges, "lk": len(edges), "degrees": degrees}


def structural_checks(g: GaussDiagram) -> dict:
    """Even valence and double connectivity of the intersection graph."""
    m = g.linked_matrix()
    c = g.c
    even = all(sum(row) % 2 == 0 for row in m)
    double = True
    for a in range(c):
        nbrs = [b for b in range(c) if m[a][b]]
        for b, cc in combinations(nbrs, 2):
            if m[b][cc]:
                continue
            if not any(d != a and m[d][b] and m[d][cc] for d in range(c)):
                double = False
                break
        if not double:
            break
    return {"evenValence": even, "doubleConnectivity": double}


def second_move_sites(g: GaussDiagram) -> list[tuple[int, int, int]]:
    """Index triples (a, b, t) where chord a has a side holding exactly one end
    of b and one of t, with b and t unlinked and their heads on different
    sides of a."""
    sites = []
    m = 2 * g.c
    for a in range(g.c):
        lo, hi = g.chord(a)
        for inner in (list(range(lo + 1, hi)), [p % m for p in range(hi + 1, lo + m)]):
            if len(inner) != 2:
                continue
            owners = [_owner(g, p) for p in inner]
            b, t = owners
            if b == t:
                continue
            if g.linked(b, t):
                continue
            if g.head_side(b, a) == g.head_side(t, a):
                continue
            sites.append((a, b, t))
    return sites


def _owner(g: GaussDiagram, p: int) -> int:
    for k in range(g.c):
        if g.under[k] == p or g.over[k] == p:
            return k
    raise KeyError(p)


def composite_cut(g: GaussDiagram) -> tuple[int, int] | None:
    """Gap pair (i, j) cutting the circle into two arcs that each contain only
    complete chords, both sides nonempty; None if there is none."""
    m = 2 * g.c
    partner = [0] * m
    for k in range(g.c):
        partner[g.under[k]] = g.over[k]
        partner[g.over[k]] = g.under[k]
    for i in range(m):
        open_ends = 0
        for length in range(1, m - 1):
            p = (i + length - 1) % m
            q = partner[p]
            if (q - i) % m < length:
                open_ends -= 1
            else:
                open_ends += 1
            if open_ends == 0 and length >= 2:
                return i, (i + length) % m
    return None


def has_51_pattern(g: GaussDiagram) -> tuple[int, int, int] | None:
    """A chord a unlinked with two mutually linked chords b and c."""
    m = g.linked_matrix()
    c = g.c
    for b, cc in combinations(range(c), 2):
        if not m[b][cc]:
            continue
        for a in range(c):
            if a not in (b, cc) and not m[a][b] and not m[a][cc]:
                return a, b, cc
    return None


def reduction_status(g: GaussDiagram) -> dict:
    m = g.linked_matrix()
    reducible = {g.ids[i] for i in range(g.c) if not any(m[i])}
    reduced = not reducible
    sites = second_move_sites(g)
    return {
        "reducibleArrows": reducible,
        "isReduced": reduced,
        "isBireduced": reduced and not sites,
        "isComposite": composite_cut(g) is not None,
        "isLoopMinimal": has_51_pattern(g) is None,
    }
