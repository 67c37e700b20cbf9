"""Exact Laurent polynomials with integer coefficients in one or more variables."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class Laurent:
    """Immutable sparse Laurent polynomial.

    Terms are stored as ``{exponent tuple: int}`` with no zero coefficients.
    ``names`` only affects printing.
    """

    __slots__ = ("terms", "names", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | None = None, names: tuple[str, ...] = ("t",)):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[tuple(e)] = int(c)
        self.terms = clean
        self.names = tuple(names)
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c: int, names=("t",)) -> "Laurent":
        return cls({(0,) * len(names): c}, names)

    @classmethod
    def mono(cls, exps: Iterable[int], c: int = 1, names=("t",)) -> "Laurent":
        return cls({tuple(exps): c}, names)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def _other(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            return other
        if isinstance(other, int):
            return Laurent.const(other, self.names)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        out: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Laurent(out, self.names)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise ValueError("monomial with non-unit coefficient")
            return Laurent({tuple(k * x for x in e): c ** (-k)}, self.names)
        result = Laurent.const(1, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.const(other, self.names)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def shift(self, exps: Iterable[int]) -> "Laurent":
        exps = tuple(exps)
        return Laurent({tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()}, self.names)

    def substitute_exponents(self, fn) -> "Laurent":
        """Map every exponent tuple through ``fn`` (used for t -> 1/t etc.)."""
        out: dict[tuple, int] = {}
        for e, c in self.terms.items():
            k = tuple(fn(e))
            out[k] = out.get(k, 0) + c
        return Laurent(out, self.names)

    # degree data
    def degrees(self, var: int = 0) -> tuple[int, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        ds = [e[var] for e in self.terms]
        return min(ds), max(ds)

    def coeff(self, exps) -> int:
        if isinstance(exps, int):
            exps = (exps,)
        return self.terms.get(tuple(exps), 0)

    def divexact(self, other: "Laurent") -> "Laurent":
        """Exact division in one variable; raises if the remainder is nonzero."""
        if self.nvars != 1:
            raise ValueError("divexact is univariate")
        num = dict((e[0], c) for e, c in self.terms.items())
        den = dict((e[0], c) for e, c in other.terms.items())
        if not num:
            return Laurent({}, self.names)
        dlo, dhi = min(den), max(den)
        lead = den[dhi]
        floor = min(num) - dlo
        quot: dict[int, int] = {}
        while num:
            hi = max(num)
            shift = hi - dhi
            c = num[hi]
            if shift < floor or c % lead:
                raise ArithmeticError("inexact division")
            q = c // lead
            quot[shift] = q
            for e, dc in den.items():
                k = e + shift
                v = num.get(k, 0) - q * dc
                if v:
                    num[k] = v
                else:
                    num.pop(k, None)
        return Laurent({(e,): c for e, c in quot.items()}, self.names)

    def evaluate(self, values) -> Fraction | complex:
        total = 0
        for e, c in self.terms.items():
            term = Fraction(c)
            for v, k in zip(values, e):
                term *= Fraction(v) ** k
            total += term
        return total

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        return sorted(self.terms.items())

    def __repr__(self):
        return f"Laurent({self})"

    def __str__(self):
        return self.format()

    def format(self, half: bool = False) -> str:
        """Human readable ``coef*x^a`` sum; ``half`` prints the first exponent in halves."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.names, e):
                if k == 0:
                    continue
                if half and name == self.names[0]:
                    k = Fraction(k, 2)
                factors.append(name if k == 1 else f"{name}^{k}")
            parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)


def from_coefficients(coeffs: Mapping[int, int], name: str = "t") -> Laurent:
    return Laurent({(e,): c for e, c in coeffs.items()}, (name,))
