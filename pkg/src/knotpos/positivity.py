"""Obstructions to positivity and braid positivity, a bounded search for
positive braid representatives, and a generator of positive diagrams.

Positivity of a knot can only be refuted here, never certified: any
answer rests on identifying a knot from a diagram, which we do not do.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .diagram_model import (BraidWord, ConwayTangle, PlanarDiagram, braid_closure,
                            connected_sum, pretzel_closure, rational_closure, to_gauss)
from .gauss_engine import intersection_graph, reduction_status
from .laurent import Laurent
from .polynomials import (DEFAULT_SKEIN_BUDGET, SkeinMemo, homfly_skein, homfly_to_conway,
                          homfly_to_jones, conway_to_alexander, morton_cromwell_values,
                          poly_derived_invariants, seifert_signature)
from .surfaces_braids import markov_reduce_positive, seifert_decomposition
from .vassiliev import v2_gauss, v3_gauss

__all__ = [
    "ObstructionEntry", "ObstructionReport", "knot_invariants", "invariants_from_homfly",
    "positivity_obstructions", "braid_positivity_obstructions", "obstruction_report",
    "decide_braid_positive", "BraidDecision", "generate_positive_corpus", "TaggedDiagram",
]

CAVEAT = ("obstructions only refute; certifying positivity would need identifying "
          "the knot from a diagram")


# ---------------------------------------------------------------- invariants

def invariants_from_homfly(P: Laurent) -> dict:
    """Invariant record of a knot derived from its HOMFLY polynomial alone."""
    V = homfly_to_jones(P)
    nabla = homfly_to_conway(P)
    delta = conway_to_alexander(nabla)
    inv = poly_derived_invariants(V, P, nabla)
    lo, hi = delta.degrees()
    inv.update({
        "V": V, "P": P, "conway": nabla, "alexander": delta,
        "maxDegAlexander": Fraction(hi, 2),
        "monic": abs(delta.coeff(hi)) == 1,
        "conwayNonnegative": all(c >= 0 for c in nabla.terms.values()),
        "mortonCromwell": morton_cromwell_values(P),
        "trivialV": V == Laurent.const(1, V.names),
    })
    return inv


def knot_invariants(d: PlanarDiagram, budget: int | None = None, signature: bool = True,
                    memo: SkeinMemo | None = None) -> dict:
    """All invariants the obstructions use, for a knot diagram.

    The Gauss-sum values of v2 and v3 are cross-checked against the ones
    derived from the Jones polynomial."""
    if d.component_count != 1:
        raise ValueError("knot_invariants needs a knot diagram")
    P = homfly_skein(d, budget=budget or DEFAULT_SKEIN_BUDGET, memo=memo)
    inv = invariants_from_homfly(P)
    if d.c:
        g = to_gauss(d)
        v2, v3 = v2_gauss(g, check=False), v3_gauss(g, check=False)
    else:
        v2 = v3 = 0
    if (v2, v3) != (inv["v2"], inv["v3"]):
        raise AssertionError(f"Gauss sums ({v2}, {v3}) disagree with Jones ({inv['v2']}, {inv['v3']})")
    inv["seifert"] = seifert_decomposition(d).as_dict()
    inv["c"] = d.c
    if signature:
        inv["signature"] = seifert_signature(d)["signature"] if d.c else 0
    return inv


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class ObstructionEntry:
    name: str
    inequality: str
    verdict: str  # passes, violated or inapplicable

    def as_dict(self) -> dict:
        return {"name": self.name, "inequality": self.inequality, "verdict": self.verdict}


@dataclass
class ObstructionReport:
    positivity: list[ObstructionEntry] = field(default_factory=list)
    braid: list[ObstructionEntry] = field(default_factory=list)

    @property
    def overall(self) -> str:
        if any(e.verdict == "violated" for e in self.positivity):
            return "not-positive"
        if any(e.verdict == "violated" for e in self.braid):
            return "not-braid-positive"
        return "consistent"

    def violated(self) -> list[str]:
        return [e.name for e in self.positivity + self.braid if e.verdict == "violated"]

    def merge(self, other: "ObstructionReport") -> "ObstructionReport":
        return ObstructionReport(self.positivity + other.positivity, self.braid + other.braid)

    def as_dict(self) -> dict:
        return {
            "positivity": [e.as_dict() for e in self.positivity],
            "braidPositivity": [e.as_dict() for e in self.braid],
            "overall": self.overall,
            "note": CAVEAT,
        }


def _fmt(x) -> str:
    return str(x) if not isinstance(x, Fraction) or x.denominator != 1 else str(x.numerator)


def _entry(name: str, holds: bool | None, text: str) -> ObstructionEntry:
    verdict = "inapplicable" if holds is None else ("passes" if holds else "violated")
    return ObstructionEntry(name, text, verdict)


def positivity_obstructions(inv: dict) -> ObstructionReport:
    """Necessary conditions for a knot to have a positive diagram.

    A crossing number lower bound is span V; a reduced positive diagram has
    at most v3 crossings, so inequalities bounding c(D) from below are
    instantiated with c = v3."""
    v2, v3 = inv["v2"], inv["v3"]
    span, maxv = inv["spanV"], inv["maxDegV"]
    trivial = inv.get("trivialV", False)
    nt = None if trivial else True
    out = []
    out.append(_entry("v2-positive", nt and v2 > 0, f"v2 = {v2} > 0"))
    out.append(_entry("v3-positive", nt and v3 > 0, f"v3 = {v3} > 0"))
    out.append(_entry("crossing-count", nt and span <= v3, f"span V = {_fmt(span)} <= v3 = {v3}"))
    out.append(_entry("v2-quarter-crossings", nt and 4 * v2 >= span, f"4 v2 = {4 * v2} >= span V = {_fmt(span)}"))
    out.append(_entry("five-v2-jones", 5 * v2 >= maxv, f"5 v2 = {5 * v2} >= max deg V = {_fmt(maxv)}"))
    if "maxDegmP" in inv:
        out.append(_entry("v3-homfly", v3 >= 2 * inv["maxDegmP"], f"v3 = {v3} >= 2 max deg_m P = {2 * inv['maxDegmP']}"))
    out.append(_entry("v3-v2-ratio", 3 * v3 >= 8 * v2, f"3 v3 = {3 * v3} >= 8 v2 = {8 * v2}"))
    if trivial:
        out.append(_entry("v3-v2-quadratic", None, "c >= 2 v2^2/(v3 - v2) with c <= v3"))
    elif v3 <= v2:
        out.append(_entry("v3-v2-quadratic", False, f"v3 = {v3} > v2 = {v2}"))
    else:
        out.append(_entry("v3-v2-quadratic", v3 * (v3 - v2) >= 2 * v2 * v2,
                          f"v3 = {v3} >= 2 v2^2/(v3 - v2) = {_fmt(Fraction(2 * v2 * v2, v3 - v2))}"))
    out.append(_entry("v3-v2-crossings", nt and 3 * v3 <= 4 * v2 * v3,
                      f"3/4 v3 = {_fmt(Fraction(3 * v3, 4))} <= v2 c with c <= v3: {v2 * v3}"))
    if "minDeglP" in inv:
        out.append(_entry("cromwell-degree", inv["minDeglP"] == inv["maxDegmP"],
                          f"min deg_l P = {inv['minDeglP']} = max deg_m P = {inv['maxDegmP']}"))
    if "conwayNonnegative" in inv:
        out.append(_entry("conway-nonnegative", inv["conwayNonnegative"], "all Conway coefficients >= 0"))
    if "mortonCromwell" in inv:
        bad = [(t, b, c) for t, row in inv["mortonCromwell"].items() for b, c in row.items() if c < 0]
        text = "P(it, iz) has no negative coefficient at t in {1/4, 1/2, 3/4, 1}"
        if bad:
            t, b, c = bad[0]
            text += f"; z^{b} at t = {t} is {c}"
        out.append(_entry("morton-cromwell", not bad, text))
    return ObstructionReport(positivity=out)


def braid_positivity_obstructions(inv: dict) -> ObstructionReport:
    """Necessary conditions for a knot to be a closed positive braid."""
    mn, span = inv["minDegV"], inv["spanV"]
    trivial = inv.get("trivialV", False)
    nt = None if trivial else True
    out = [
        _entry("min-deg-jones-positive", nt and mn > 0, f"min deg V = {_fmt(mn)} > 0"),
        _entry("min-coefficient-jones", nt and inv["minCfV"] == 1, f"min cf V = {inv['minCfV']} = 1"),
        _entry("min-deg-quarter-crossings", nt and 4 * mn >= span,
               f"min deg V = {_fmt(mn)} >= span V/4 = {_fmt(span / 4)}"),
    ]
    if "monic" in inv:
        out.append(_entry("monic-alexander", nt and inv["monic"], "Alexander polynomial monic"))
    if "maxDegAlexander" in inv:
        out.append(_entry("fibered-degree", nt and inv["maxDegAlexander"] == mn,
                          f"max deg Delta = {_fmt(inv['maxDegAlexander'])} = min deg V = {_fmt(mn)}"))
    return ObstructionReport(braid=out)


def obstruction_report(inv: dict) -> ObstructionReport:
    return positivity_obstructions(inv).merge(braid_positivity_obstructions(inv))


# ---------------------------------------------------------------- braid search

@dataclass
class BraidDecision:
    answer: str  # yes, no or unknown
    witness: BraidWord | None = None
    report: ObstructionReport | None = None
    examined: int = 0
    reason: str = ""

    def as_dict(self) -> dict:
        out = {"answer": self.answer, "examined": self.examined, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = {"n": self.witness.n, "letters": list(self.witness.letters)}
        if self.report is not None:
            out["report"] = self.report.as_dict()
        if self.answer == "yes":
            out["certificate"] = "closure agrees on V, P and signature; not an isotopy proof"
        return out


def _canonical_word(word: tuple[int, ...]) -> bool:
    """Lexicographically least among its rotations, with commuting
    neighbours in increasing order (cyclically)."""
    L = len(word)
    for r in range(1, L):
        if word[r:] + word[:r] < word:
            return False
    for i in range(L):
        a, b = word[i], word[(i + 1) % L]
        if abs(a - b) >= 2 and a > b:
            return False
    return True


def _words(n: int, L: int):
    gens = range(1, n)
    for word in product(gens, repeat=L):
        if word[0] != 1:
            # every rotation class has a representative starting with 1
            continue
        if any(word.count(g) < 2 for g in gens):
            continue
        if not _canonical_word(word):
            continue
        b = BraidWord(n, word)
        if b.closure_components() != 1:
            continue
        yield b


def decide_braid_positive(K: PlanarDiagram, budget: int | None = None, max_words: int = 200000,
                          skein_budget: int | None = None) -> BraidDecision:
    """Search positive braids whose closure could be K.

    A reduced positive braid of a knot with min deg V = m has 2m + n - 1
    letters on n <= 2m + 1 strands.  Candidates are compared on V, then P,
    then the signature."""
    inv = knot_invariants(K, budget=skein_budget)
    report = obstruction_report(inv)
    if inv.get("trivialV"):
        return BraidDecision("unknown", report=report, reason="trivial Jones polynomial")
    if report.overall != "consistent":
        return BraidDecision("no", report=report, reason="obstruction violated: " + ", ".join(report.violated()))
    m = inv["minDegV"]
    if m.denominator != 1 or m < 1:
        return BraidDecision("no", report=report, reason="min deg V is not a positive integer")
    m = int(m)
    cap = 4 * m if budget is None else min(4 * m, budget)
    examined = 0
    truncated = False
    for n in range(2, 2 * m + 2):
        L = 2 * m + n - 1
        if L > cap:
            truncated = True
            continue
        for b in _words(n, L):
            examined += 1
            if examined > max_words:
                return BraidDecision("unknown", report=report, examined=examined - 1,
                                     reason=f"search cap {max_words} reached")
            d = braid_closure(b)
            P = homfly_skein(d, budget=max(L, DEFAULT_SKEIN_BUDGET))
            if P != inv["P"]:
                continue
            if seifert_signature(d)["signature"] != inv["signature"]:
                continue
            reduced = markov_reduce_positive(b)
            return BraidDecision("yes", witness=reduced, report=report, examined=examined,
                                 reason="closure agrees on V, P and signature")
    if truncated:
        return BraidDecision("unknown", report=report, examined=examined,
                             reason=f"length budget {cap} below the bound {4 * m}")
    return BraidDecision("no", report=report, examined=examined, reason="search space exhausted")


# ---------------------------------------------------------------- corpus

@dataclass(frozen=True)
class TaggedDiagram:
    diagram: PlanarDiagram
    meta: dict


FAMILIES = ("braid", "rational", "pretzel", "torus", "sum")


def _positive(d: PlanarDiagram) -> PlanarDiagram | None:
    signs = {x.sign for x in d.crossings}
    if signs == {1}:
        return d
    if signs == {-1}:
        return d.mirror()
    return None


def _reduced(d: PlanarDiagram) -> bool:
    return reduction_status(to_gauss(d))["isReduced"]


def _draw(family: str, rng: random.Random, lo: int, hi: int, index: int, seed: int):
    if family == "torus":
        q = 2 * (seed + index) + 5
        q = lo + (q - lo) % (hi - lo + 1)
        q += 1 - q % 2
        if q > hi:
            q -= 2
        return braid_closure(BraidWord(2, (1,) * q)), {"family": "torus", "q": q}
    if family == "braid":
        n = rng.randint(2, max(2, min(5, hi // 2 + 1)))
        L = rng.randint(min(hi, max(lo, 2 * (n - 1))), hi)
        b = markov_reduce_positive(BraidWord(n, tuple(rng.randint(1, n - 1) for _ in range(L))))
        return braid_closure(b), {"family": "braid", "braid": [b.n, list(b.letters)]}
    if family == "rational":
        entries = []
        while sum(entries) < lo or not entries:
            entries.append(rng.randint(1, 4))
        if entries[0] == 1:
            entries[0] = 2
        return rational_closure(ConwayTangle(tuple(entries))), {"family": "rational", "conway": entries}
    if family == "pretzel":
        k = rng.choice((3, 3, 5))
        entries = [rng.choice((1, 3, 5)) for _ in range(k)]
        return pretzel_closure(entries), {"family": "pretzel", "entries": entries}
    a, ma = _draw(rng.choice(("braid", "rational", "pretzel")), rng, 3, max(3, hi // 2), index, seed)
    b, mb = _draw(rng.choice(("braid", "rational", "pretzel")), rng, 3, max(3, hi // 2), index, seed)
    pa, pb = _positive(a), _positive(b)
    if pa is None or pb is None:
        return a, {"family": "sum", "parts": [ma, mb]}
    return connected_sum(pa, pb), {"family": "sum", "parts": [ma, mb]}


def generate_positive_corpus(seed: int, count: int, size_range: tuple[int, int] = (3, 16),
                             families: tuple[str, ...] = FAMILIES) -> list[TaggedDiagram]:
    """Deterministic list of positive reduced knot diagrams with metadata."""
    lo, hi = size_range
    rng = random.Random(seed)
    out: list[TaggedDiagram] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count + 1000:
            raise RuntimeError("corpus generation stalled; widen the size range")
        family = families[len(out) % len(families)]
        d, meta = _draw(family, rng, lo, hi, len(out), seed)
        if d.component_count != 1 or not (lo <= d.c <= hi):
            continue
        d = _positive(d)
        if d is None or not _reduced(d):
            continue
        s = seifert_decomposition(d)
        g = to_gauss(d)
        meta = dict(meta, c=d.c, gCan=int(s.canonical_genus), seifertCircles=s.circles,
                    linkedPairs=intersection_graph(g)["lk"], positive=True)
        out.append(TaggedDiagram(d, meta))
    return out
