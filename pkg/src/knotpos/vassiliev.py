"""Gauss-sum evaluation of the degree 2 and 3 Vassiliev invariants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable

from .gauss_engine import GaussDiagram, structural_checks

__all__ = [
    "ConfigurationPattern", "match_config", "v2_gauss", "v3_gauss",
    "arrow_statistics", "LINKED_PAIR", "TRIPLE_33", "TRIPLE_420",
    "BASED_PAIR_A", "BASED_PAIR_B",
]


@dataclass(frozen=True)
class ConfigurationPattern:
    """Arrow pattern given by the order of its 2k endpoints.

    ``sequence`` lists (pattern chord, kind) around the circle, kind being
    'O' (head), 'U' (tail) or 'E' (either end of an undirected chord).
    Based patterns are read linearly from the basepoint, unbased ones up to
    rotation.
    """

    name: str
    sequence: tuple[tuple[int, str], ...]
    based: bool = False
    weight: str = "product"

    @property
    def k(self) -> int:
        return len({i for i, _ in self.sequence})

    def linked_pairs(self) -> int:
        pos: dict[int, list[int]] = {}
        for p, (i, _) in enumerate(self.sequence):
            pos.setdefault(i, []).append(p)
        count = 0
        for i, j in combinations(sorted(pos), 2):
            lo, hi = pos[i]
            a, b = pos[j]
            count += (lo < a < hi) != (lo < b < hi)
        return count


LINKED_PAIR = ConfigurationPattern("linked pair", ((0, "E"), (1, "E"), (0, "E"), (1, "E")))
TRIPLE_33 = ConfigurationPattern("(3,3)", ((0, "E"), (1, "E"), (2, "E"), (0, "E"), (1, "E"), (2, "E")))
# chord 0 crosses chords 1 and 2, which are unlinked and have both heads on one side of it
TRIPLE_420 = ConfigurationPattern("(4,2)0", ((0, "E"), (1, "O"), (2, "O"), (0, "E"), (2, "U"), (1, "U")))
BASED_PAIR_A = ConfigurationPattern("based O1 U2 U1 O2", ((0, "O"), (1, "U"), (0, "U"), (1, "O")), based=True)
BASED_PAIR_B = ConfigurationPattern("based U1 O2 O1 U2", ((0, "U"), (1, "O"), (0, "O"), (1, "U")), based=True)


def _kinds_match(pattern_kind: str, kind: str) -> bool:
    return pattern_kind == "E" or pattern_kind == kind


def match_config(g: GaussDiagram, p: ConfigurationPattern) -> list[dict[int, int]]:
    """All matches as maps pattern chord -> arrow index, one per arrow set."""
    if p.based:
        g = g.rebased()
    k = p.k
    want_links = p.linked_pairs()
    lm = g.linked_matrix()
    ends = []
    for idx in range(g.c):
        ends.append((g.under[idx], idx, "U"))
        ends.append((g.over[idx], idx, "O"))
    ends.sort()
    pat = list(p.sequence)
    m = len(pat)
    out = []
    for subset in combinations(range(g.c), k):
        if sum(lm[i][j] for i, j in combinations(subset, 2)) != want_links:
            continue
        chosen = set(subset)
        seq = [(idx, kind) for _, idx, kind in ends if idx in chosen]
        rotations = [0] if p.based else range(m)
        found = None
        for perm in permutations(subset):
            for r in rotations:
                ok = True
                for t in range(m):
                    pi, pk = pat[(t + r) % m]
                    idx, kind = seq[t]
                    if perm[pi] != idx or not _kinds_match(pk, kind):
                        ok = False
                        break
                if ok:
                    found = {pi: perm[pi] for pi in range(k)}
                    break
            if found:
                break
        if found:
            out.append(found)
    return out


def _weighted(g: GaussDiagram, p: ConfigurationPattern) -> Fraction:
    total = Fraction(0)
    for match in match_config(g, p):
        w = 1
        for idx in match.values():
            w *= g.writhe[idx]
        total += w
    return total


def _require_realizable(g: GaussDiagram):
    checks = structural_checks(g)
    if not (checks["evenValence"] and checks["doubleConnectivity"]):
        raise ValueError("Gauss diagram is not realizable")


def v2_gauss(g: GaussDiagram, check: bool = True) -> int:
    """Half the sum of the two based two-arrow Gauss sums."""
    if check:
        _require_realizable(g)
    value = (_weighted(g, BASED_PAIR_A) + _weighted(g, BASED_PAIR_B)) / 2
    if value.denominator != 1:
        raise ArithmeticError(f"v2 not integral: {value}")
    return int(value)


def v3_gauss(g: GaussDiagram, check: bool = True) -> int:
    if check:
        _require_realizable(g)
    total = _weighted(g, TRIPLE_33) + _weighted(g, TRIPLE_420)
    for match in match_config(g, LINKED_PAIR):
        total += Fraction(g.writhe[match[0]] + g.writhe[match[1]], 2)
    if total.denominator != 1:
        raise ArithmeticError(f"v3 not integral: {total}")
    return int(total)


def arrow_statistics(g: GaussDiagram, basepoint: int = 0) -> dict:
    """Per-arrow linked counts, distinguished counts and based-pattern counts."""
    g = g.with_basepoint(basepoint) if g.c else g
    lm = g.linked_matrix()
    l = {g.ids[i]: sum(lm[i]) for i in range(g.c)}
    m = 2 * g.c
    dist = {cid: 0 for cid in g.ids}
    for i, j in combinations(range(g.c), 2):
        if not lm[i][j]:
            continue
        # cyclically after O_i among the four ends comes an end of j
        nxt_after_oi = min(((x - g.over[i]) % m, x) for x in (g.under[j], g.over[j]))[1]
        if nxt_after_oi == g.under[j]:
            dist[g.ids[i]] += 1
        else:
            dist[g.ids[j]] += 1
    based = {cid: 0 for cid in g.ids}
    for pat in (BASED_PAIR_A, BASED_PAIR_B):
        for match in match_config(g, pat):
            based[g.ids[match[0]]] += 1
    return {"l": l, "distinguished": dist, "basedPairs": based}
