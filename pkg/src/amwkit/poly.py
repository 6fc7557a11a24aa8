"""Sparse multivariate polynomials with exact rational coefficients.

Terms live in a dict mapping exponent tuples to nonzero ``Fraction``
coefficients.  ``PolyNoConst`` adds the invariants the algebra constructions
need: at least one term and no constant term.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ParameterError


def _coef(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        if not math.isfinite(c):
            raise ParameterError(f"non-finite coefficient {c!r}")
        return Fraction(c)
    return Fraction(c)


class Polynomial:
    """Polynomial in ``nvars`` variables; a constant term is allowed."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | Iterable = ()):
        if nvars < 1:
            raise ParameterError("a polynomial needs at least one variable")
        acc: dict[tuple, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ParameterError(f"bad exponent vector {exps} for {nvars} variables")
            acc[exps] = acc.get(exps, Fraction(0)) + _coef(c)
        self.nvars = nvars
        self.terms = {e: c for e, c in sorted(acc.items()) if c != 0}

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        return cls(nvars, {tuple(int(k == i) for k in range(nvars)): 1})

    @classmethod
    def const(cls, c, nvars: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    # structure -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    # arithmetic ------------------------------------------------------

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ParameterError("variable counts differ")
            return other
        return Polynomial.const(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        return Polynomial(self.nvars, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = []
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ParameterError("negative power")
        out = Polynomial.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    # evaluation ------------------------------------------------------

    def __call__(self, *values):
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = tuple(values[0])
        if len(values) != self.nvars:
            raise ParameterError(f"expected {self.nvars} values, got {len(values)}")
        exact = all(isinstance(v, (int, Fraction)) for v in values)
        total = Fraction(0) if exact else 0.0
        for exps, c in self.terms.items():
            term = c if exact else float(c)
            for v, e in zip(values, exps):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                            for i, e in enumerate(exps) if e)
            if not mono:
                parts.append(f"{c}")
            elif abs(c) == 1:
                parts.append(mono if c > 0 else f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        return [[list(e), str(c)] for e, c in self.terms.items()]


class PolyNoConst(Polynomial):
    """Nonzero polynomial without constant term."""

    __slots__ = ()

    def __init__(self, nvars: int, terms=()):
        super().__init__(nvars, terms)
        if not self.terms:
            raise ParameterError("zero polynomial: every coefficient cancelled")
        if (0,) * nvars in self.terms:
            raise ParameterError("polynomial has a constant term")

    @classmethod
    def univariate(cls, coeffs: Mapping[int, object]) -> "PolyNoConst":
        """From ``{degree: coefficient}``; degree 0 is rejected."""
        return cls(1, {(d,): c for d, c in coeffs.items()})

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "PolyNoConst":
        return cls(p.nvars, p.terms)

    @property
    def lowest_degree(self) -> int:
        return min(sum(e) for e in self.terms)

    def leading_low_term(self) -> tuple[int, Fraction]:
        """``(t, p0)`` with ``P(x) = p0 x^t + higher`` for a univariate ``P``."""
        if self.nvars != 1:
            raise ParameterError("only defined for one variable")
        t = self.lowest_degree
        return t, self.terms[(t,)]

    @property
    def is_identity(self) -> bool:
        return self.nvars == 1 and self.terms == {(1,): Fraction(1)}

    def degree_groups(self) -> dict[int, list[tuple[tuple, Fraction]]]:
        groups: dict[int, list] = {}
        for e, c in self.terms.items():
            groups.setdefault(sum(e), []).append((e, c))
        return groups


def poly_from_json(nvars: int, terms: Sequence) -> PolyNoConst:
    """Parse ``[[exponents, coefficient], ...]``; coefficients may be strings like ``"1/2"``."""
    return PolyNoConst(nvars, [(tuple(e), Fraction(c) if isinstance(c, str) else c)
                               for e, c in terms])
