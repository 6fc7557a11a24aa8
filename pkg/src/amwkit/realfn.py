"""Continuous functions on a compact interval, built from closed-form pieces.

Coordinates (interval endpoints, breakpoints, evaluation points) are exact
``Fraction`` values while function values are floats.  Exact coordinates keep
partition points that accumulate at an endpoint distinct far below float
resolution, so a bump living on ``[1 - 2**-60, 1 - 2**-61]`` is still located
and evaluated correctly.

Every form knows four things about itself on a sub-interval ``[p, q]``: its
value at a point, a vectorised evaluation along ``x = p + h*s``, a supremum
enclosure of its absolute value, and whether it is monotone or identically
zero there.  Sup norms are exact whenever the structure allows it and fall back
to sampling with golden-section refinement otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, ParameterError

Real = Union[int, float, Fraction]

SAMPLES_PER_PIECE = 1025
NONEXACT_REL = 1e-10
NONEXACT_ABS = 1e-12
CONTINUITY_TOL = 1e-12
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def exact(x) -> Fraction:
    """Return ``x`` as a Fraction; floats convert without rounding."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise DomainError(f"non-finite coordinate {x!r}")
        return Fraction(float(x))
    if isinstance(x, (str, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as a coordinate")


@dataclass(frozen=True)
class Interval:
    """Nondegenerate closed interval ``[lo, hi]`` with exact endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", exact(self.lo))
        object.__setattr__(self, "hi", exact(self.hi))
        if not self.lo < self.hi:
            raise DomainError(f"degenerate interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        X = exact(x)
        return self.lo <= X <= self.hi

    def point(self, s) -> Fraction:
        return self.lo + self.width * exact(s)

    def grid(self, m: int) -> list[Fraction]:
        """``m`` equispaced points including both endpoints."""
        if m < 2:
            raise ParameterError("a grid needs at least two points")
        return [self.lo + self.width * Fraction(k, m - 1) for k in range(m)]

    def overlaps(self, other: "Interval") -> bool:
        """True when the open intervals share a point."""
        return max(self.lo, other.lo) < min(self.hi, other.hi)

    def as_floats(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)

    def __str__(self) -> str:
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"


UNIT = Interval(0, 1)


@dataclass(frozen=True)
class NormEnclosure:
    """Enclosure ``lower <= ||f||_inf <= upper``; ``exact`` marks a closed-form value."""

    lower: float
    upper: float
    exact: bool = False

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError(f"invalid enclosure [{self.lower}, {self.upper}]")
        if self.exact and self.upper - self.lower > 1e-12 * max(1.0, self.upper):
            raise ValueError("exact enclosure wider than 1e-12")

    @classmethod
    def point(cls, value: float) -> "NormEnclosure":
        v = abs(float(value))
        return cls(v, v, True)

    @classmethod
    def sampled(cls, best: float) -> "NormEnclosure":
        b = abs(float(best))
        return cls(b, b * (1.0 + NONEXACT_REL) + NONEXACT_ABS, False)

    @classmethod
    def join(cls, encs: Iterable["NormEnclosure"]) -> "NormEnclosure":
        encs = list(encs)
        if not encs:
            return cls.point(0.0)
        return cls(max(e.lower for e in encs), max(e.upper for e in encs),
                   all(e.exact for e in encs))

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def value(self) -> float:
        """Best single estimate (the lower end: a value actually attained)."""
        return self.lower

    def scaled(self, factor: float) -> "NormEnclosure":
        k = abs(float(factor))
        return NormEnclosure(self.lower * k, self.upper * k, self.exact)

    def power(self, k: int) -> "NormEnclosure":
        return NormEnclosure(self.lower ** k, self.upper ** k, self.exact)

    def contains(self, v: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= v <= self.upper + tol

    def intersects(self, other: "NormEnclosure", tol: float = 1e-12) -> bool:
        return self.lower <= other.upper + tol and other.lower <= self.upper + tol

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact}


def _combine_dirs(dirs: Iterable[Optional[int]]) -> Optional[int]:
    seen = set()
    for d in dirs:
        if d is None:
            return None
        if d:
            seen.add(d)
    if len(seen) > 1:
        return None
    return seen.pop() if seen else 0


def _endpoint_sup(fn_value, p: Fraction, q: Fraction):
    vp, vq = abs(fn_value(p)), abs(fn_value(q))
    if vq > vp:
        return NormEnclosure.point(vq), q
    return NormEnclosure.point(vp), p


# ---------------------------------------------------------------- forms


class Form:
    """Closed-form expression for one piece.  Subclasses override as needed."""

    kind = "form"

    def value(self, X: Fraction) -> float:
        raise NotImplementedError

    def local(self, p: Fraction, h: Fraction, s: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sup(self, p: Fraction, q: Fraction, use_known: bool = True):
        d = self.direction(p, q)
        if d is not None:
            return _endpoint_sup(self.value, p, q)
        return _sampled_sup(self, p, q)

    def direction(self, p: Fraction, q: Fraction) -> Optional[int]:
        return None

    def breakpoints(self, p: Fraction, q: Fraction) -> set:
        return set()

    def is_zero_on(self, p: Fraction, q: Fraction) -> bool:
        return False

    def describe(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True, eq=False)
class Zero(Form):
    kind = "zero"

    def value(self, X):
        return 0.0

    def local(self, p, h, s):
        return np.zeros_like(s, dtype=float)

    def sup(self, p, q, use_known=True):
        return NormEnclosure.point(0.0), p

    def direction(self, p, q):
        return 0

    def is_zero_on(self, p, q):
        return True


@dataclass(frozen=True, eq=False)
class Affine(Form):
    """Line through ``(x0, y0)`` and ``(x1, y1)``, exact at both anchors."""

    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction
    kind = "affine"

    def value(self, X):
        d = self.x1 - self.x0
        return float((self.y0 * (self.x1 - X) + self.y1 * (X - self.x0)) / d)

    def local(self, p, h, s):
        d = self.x1 - self.x0
        w0, w1 = float((p - self.x0) / d), float(h / d)
        w = w0 + w1 * s
        return float(self.y0) * (1.0 - w) + float(self.y1) * w

    def direction(self, p, q):
        return (self.y1 > self.y0) - (self.y1 < self.y0)

    def is_zero_on(self, p, q):
        return self.y0 == 0 and self.y1 == 0

    @property
    def slope(self) -> float:
        return float((self.y1 - self.y0) / (self.x1 - self.x0))

    def describe(self):
        return {"kind": self.kind, "slope": self.slope,
                "intercept": float(self.y0 - (self.y1 - self.y0) / (self.x1 - self.x0) * self.x0)}


@dataclass(frozen=True, eq=False)
class Power(Form):
    """``x -> ((x - a) / (b - a)) ** c`` with ``c > 0``."""

    c: float
    a: Fraction
    b: Fraction
    kind = "power"

    def value(self, X):
        t = float((X - self.a) / (self.b - self.a))
        return max(t, 0.0) ** self.c

    def local(self, p, h, s):
        t0 = float((p - self.a) / (self.b - self.a))
        t1 = float(h / (self.b - self.a))
        return np.clip(t0 + t1 * s, 0.0, None) ** self.c

    def direction(self, p, q):
        return 1

    def describe(self):
        return {"kind": self.kind, "c": self.c}


@dataclass(frozen=True, eq=False)
class Exp(Form):
    """``x -> exp(c x)``."""

    c: float
    kind = "exp"

    def value(self, X):
        return math.exp(self.c * float(X))

    def local(self, p, h, s):
        return np.exp(self.c * (float(p) + float(h) * s))

    def direction(self, p, q):
        return (self.c > 0) - (self.c < 0)

    def describe(self):
        return {"kind": self.kind, "c": self.c}


@dataclass(frozen=True, eq=False)
class SinSqBump(Form):
    """``x -> sin^2(2^(n+1) pi x) / n``; the phase is reduced exactly mod 1."""

    n: int
    kind = "sinsq_bump"

    def _phase(self, X: Fraction) -> Fraction:
        return (X * 2 ** (self.n + 1)) % 1

    def value(self, X):
        return math.sin(math.pi * float(self._phase(X))) ** 2 / self.n

    def local(self, p, h, s):
        y0 = float(self._phase(p))
        y1 = float(h * 2 ** (self.n + 1))
        return np.sin(np.pi * (y0 + y1 * s)) ** 2 / self.n

    def sup(self, p, q, use_known=True):
        scale = 2 ** (self.n + 2)
        lo, hi = math.ceil(p * scale), math.floor(q * scale)
        if lo <= hi:
            m = lo if lo % 2 else lo + 1
            if m <= hi:
                return NormEnclosure.point(1.0 / self.n), Fraction(m, scale)
        return _endpoint_sup(self.value, p, q)

    def describe(self):
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True, eq=False)
class Transplant(Form):
    """``x -> inner(tau(x))`` with ``tau`` the increasing affine map ``[lo, hi] -> inner.domain``."""

    inner: "RealFn"
    lo: Fraction
    hi: Fraction
    kind = "transplant"

    @property
    def _ratio(self) -> Fraction:
        return self.inner.domain.width / (self.hi - self.lo)

    def tau(self, X: Fraction) -> Fraction:
        return self.inner.domain.lo + self._ratio * (X - self.lo)

    def tau_inv(self, Y: Fraction) -> Fraction:
        return self.lo + (Y - self.inner.domain.lo) / self._ratio

    def value(self, X):
        return self.inner._value_exact(self.tau(X))

    def local(self, p, h, s):
        return self.inner._local(self.tau(p), h * self._ratio, s)

    def sup(self, p, q, use_known=True):
        enc, arg = _sup_on(self.inner, self.tau(p), self.tau(q), use_known)
        return enc, (None if arg is None else self.tau_inv(arg))

    def direction(self, p, q):
        return _fn_direction(self.inner, self.tau(p), self.tau(q))

    def breakpoints(self, p, q):
        return {self.tau_inv(y) for y in _fn_breakpoints(self.inner, self.tau(p), self.tau(q))}

    def is_zero_on(self, p, q):
        return _fn_is_zero_on(self.inner, self.tau(p), self.tau(q))

    def describe(self):
        return {"kind": self.kind, "inner": self.inner.label,
                "target": [float(self.lo), float(self.hi)]}


@dataclass(frozen=True, eq=False)
class ScaledSum(Form):
    """``x -> sum(c_i * f_i(x))``."""

    terms: tuple
    kind = "scaled_sum"

    def value(self, X):
        return math.fsum(c * f._value_exact(X) for c, f in self.terms)

    def local(self, p, h, s):
        out = np.zeros_like(s, dtype=float)
        for c, f in self.terms:
            out += c * f._local(p, h, s)
        return out

    def sup(self, p, q, use_known=True):
        live = [(c, f) for c, f in self.terms if c != 0 and not _fn_is_zero_on(f, p, q)]
        if not live:
            return NormEnclosure.point(0.0), p
        if len(live) == 1:
            c, f = live[0]
            enc, arg = _sup_on(f, p, q, use_known)
            return enc.scaled(c), arg
        return super().sup(p, q, use_known)

    def direction(self, p, q):
        dirs = []
        for c, f in self.terms:
            if c == 0:
                continue
            d = _fn_direction(f, p, q)
            dirs.append(None if d is None else d * (1 if c > 0 else -1))
        return _combine_dirs(dirs)

    def breakpoints(self, p, q):
        out = set()
        for _, f in self.terms:
            out |= _fn_breakpoints(f, p, q)
        return out

    def is_zero_on(self, p, q):
        return all(c == 0 or _fn_is_zero_on(f, p, q) for c, f in self.terms)

    def describe(self):
        return {"kind": self.kind, "terms": [[c, f.label] for c, f in self.terms]}


@dataclass(frozen=True, eq=False)
class Product(Form):
    """``x -> prod(f_i(x) ** k_i)`` with positive integer exponents."""

    factors: tuple
    kind = "product"

    def value(self, X):
        out = 1.0
        for f, k in self.factors:
            out *= f._value_exact(X) ** k
        return out

    def local(self, p, h, s):
        out = np.ones_like(s, dtype=float)
        for f, k in self.factors:
            out *= f._local(p, h, s) ** k
        return out

    def sup(self, p, q, use_known=True):
        if self.is_zero_on(p, q):
            return NormEnclosure.point(0.0), p
        if len(self.factors) == 1:
            f, k = self.factors[0]
            enc, arg = _sup_on(f, p, q, use_known)
            return enc.power(k), arg
        return super().sup(p, q, use_known)

    def direction(self, p, q):
        if len(self.factors) == 1 and self.factors[0][1] == 1:
            return _fn_direction(self.factors[0][0], p, q)
        return None

    def breakpoints(self, p, q):
        out = set()
        for f, _ in self.factors:
            out |= _fn_breakpoints(f, p, q)
        return out

    def is_zero_on(self, p, q):
        return any(_fn_is_zero_on(f, p, q) for f, _ in self.factors)

    def describe(self):
        return {"kind": self.kind, "factors": [[f.label, k] for f, k in self.factors]}


# ---------------------------------------------------------------- RealFn


@dataclass(frozen=True, eq=False)
class RealFn:
    """A continuous function on ``domain`` given by ordered closed-form pieces.

    Pieces are ``(Interval, Form)`` pairs whose intervals tile the domain.  At a
    shared breakpoint evaluation uses the left piece; construction rejects
    pieces that disagree there by more than ``CONTINUITY_TOL``.
    """

    domain: Interval
    pieces: tuple
    known_sup_norm: Optional[float] = None
    support: Optional[Interval] = None
    label: str = "f"

    def __post_init__(self):
        if not self.pieces:
            raise DomainError("a RealFn needs at least one piece")
        if self.pieces[0][0].lo != self.domain.lo or self.pieces[-1][0].hi != self.domain.hi:
            raise DomainError("pieces do not cover the domain")
        for (i1, f1), (i2, f2) in zip(self.pieces, self.pieces[1:]):
            if i1.hi != i2.lo:
                raise DomainError(f"pieces leave a gap or overlap at {float(i1.hi)}")
            v1, v2 = f1.value(i1.hi), f2.value(i2.lo)
            if abs(v1 - v2) > CONTINUITY_TOL * max(1.0, abs(v1), abs(v2)):
                raise DomainError(f"discontinuity at x={float(i1.hi)!r}: {v1!r} vs {v2!r}")
        if self.known_sup_norm is not None and self.known_sup_norm < 0:
            raise ParameterError("sup norm must be nonnegative")

    # evaluation ------------------------------------------------------

    def _piece_at(self, X: Fraction):
        for iv, form in self.pieces:
            if iv.lo <= X <= iv.hi:
                return form
        raise DomainError(f"x={float(X)!r} outside {self.domain}")

    def _value_exact(self, X: Fraction) -> float:
        return self._piece_at(X).value(X)

    def _local(self, p: Fraction, h: Fraction, s: np.ndarray) -> np.ndarray:
        return self._piece_at(p + h / 2).local(p, h, s)

    def eval(self, x) -> float:
        """Value at ``x``; a shared breakpoint takes the left piece."""
        X = exact(x)
        if not (self.domain.lo <= X <= self.domain.hi):
            raise DomainError(f"x={float(X)!r} outside {self.domain}")
        return self._value_exact(X)

    __call__ = eval

    def eval_many(self, xs: Iterable) -> np.ndarray:
        return np.array([self.eval(x) for x in xs], dtype=float)

    @cached_property
    def value_at_lo(self) -> float:
        return self._value_exact(self.domain.lo)

    @cached_property
    def value_at_hi(self) -> float:
        return self._value_exact(self.domain.hi)

    def breakpoints(self) -> list[Fraction]:
        """Sorted structural breakpoints, nested ones included, plus the endpoints."""
        inner = _fn_breakpoints(self, self.domain.lo, self.domain.hi)
        return sorted(inner | {self.domain.lo, self.domain.hi})

    @property
    def is_structurally_zero(self) -> bool:
        return _fn_is_zero_on(self, self.domain.lo, self.domain.hi)

    # arithmetic ------------------------------------------------------

    def scale(self, factor: float) -> "RealFn":
        factor = float(factor)
        if factor == 0.0:
            return zero_fn(self.domain)
        if factor == 1.0:
            return self
        known = None if self.known_sup_norm is None else abs(factor) * self.known_sup_norm
        return RealFn(self.domain, ((self.domain, ScaledSum(((factor, self),))),),
                      known, self.support, f"{factor:g}*{self.label}")

    def __add__(self, other):
        if not isinstance(other, RealFn):
            return NotImplemented
        return scaled_sum([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        if not isinstance(other, RealFn):
            return NotImplemented
        return scaled_sum([(1.0, self), (-1.0, other)])

    def __neg__(self):
        return self.scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, RealFn):
            return product([(self, 1), (other, 1)])
        if isinstance(other, (int, float, Fraction, np.floating, np.integer)):
            return self.scale(float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return product([(self, int(k))])

    def describe(self) -> dict:
        return {
            "label": self.label,
            "domain": [float(self.domain.lo), float(self.domain.hi)],
            "pieces": [{"interval": [float(iv.lo), float(iv.hi)], **form.describe()}
                       for iv, form in self.pieces],
            "known_sup_norm": self.known_sup_norm,
            "support": None if self.support is None else [float(self.support.lo), float(self.support.hi)],
        }

    def __repr__(self) -> str:
        return f"RealFn({self.label} on {self.domain})"


# ---------------------------------------------------------------- structural helpers


def _overlapping(f: RealFn, p: Fraction, q: Fraction):
    """Pieces of ``f`` clipped to ``[p, q]``; a point query returns one clip."""
    if p == q:
        return [(p, q, f._piece_at(p))]
    out = []
    for iv, form in f.pieces:
        lo, hi = max(iv.lo, p), min(iv.hi, q)
        if lo < hi:
            out.append((lo, hi, form))
    return out


def _fn_breakpoints(f: RealFn, p: Fraction, q: Fraction) -> set:
    out = set()
    for lo, hi, form in _overlapping(f, p, q):
        if p < lo:
            out.add(lo)
        if hi < q:
            out.add(hi)
        if lo < hi:
            out |= form.breakpoints(lo, hi)
    return {x for x in out if p < x < q}


def _fn_is_zero_on(f: RealFn, p: Fraction, q: Fraction) -> bool:
    return all(form.is_zero_on(lo, hi) for lo, hi, form in _overlapping(f, p, q))


def _fn_direction(f: RealFn, p: Fraction, q: Fraction) -> Optional[int]:
    return _combine_dirs(form.direction(lo, hi) for lo, hi, form in _overlapping(f, p, q))


def _sup_on(f: RealFn, p: Fraction, q: Fraction, use_known: bool = True):
    if use_known and f.known_sup_norm is not None and p == f.domain.lo and q == f.domain.hi:
        return NormEnclosure.point(f.known_sup_norm), None
    best_enc, best_arg, encs = None, None, []
    for lo, hi, form in _overlapping(f, p, q):
        enc, arg = form.sup(lo, hi, use_known)
        encs.append(enc)
        if best_enc is None or enc.lower > best_enc.lower:
            best_enc, best_arg = enc, arg
    return NormEnclosure.join(encs), best_arg


def _golden_max(g, lo: float, hi: float, tol: float):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    gc, gd = g(c), g(d)
    best = max((gc, c), (gd, d))
    while hi - lo > tol:
        if gc >= gd:
            hi, d, gd = d, c, gc
            c = hi - _INVPHI * (hi - lo)
            gc = g(c)
            best = max(best, (gc, c))
        else:
            lo, c, gc = c, d, gd
            d = lo + _INVPHI * (hi - lo)
            gd = g(d)
            best = max(best, (gd, d))
    return best


def _sampled_sup(form: Form, p: Fraction, q: Fraction):
    """Sup of ``|form|`` on ``[p, q]`` by sampling each breakpoint-free cell.

    Cells where the form is structurally zero are skipped and monotone cells
    are settled from their endpoints; only the rest are sampled, so the result
    is exact when no cell needed sampling.
    """
    if p == q:
        return NormEnclosure.point(form.value(p)), p
    cuts = sorted(form.breakpoints(p, q) | {p, q})
    tol_x = 1e-12 * float(q - p)
    best_val, best_arg, sampled = 0.0, p, False
    s_grid = np.linspace(0.0, 1.0, SAMPLES_PER_PIECE)
    for lo, hi in zip(cuts, cuts[1:]):
        if form.is_zero_on(lo, hi):
            continue
        if form.direction(lo, hi) is not None:
            enc, arg = _endpoint_sup(form.value, lo, hi)
            if enc.lower > best_val:
                best_val, best_arg = enc.lower, arg
            continue
        sampled = True
        h = hi - lo
        vals = np.abs(form.local(lo, h, s_grid))
        tol_s = max(tol_x / float(h), 1e-15)

        def g(s, lo=lo, h=h):
            return float(abs(form.local(lo, h, np.array([s]))[0]))

        for i in np.argsort(vals)[-3:]:
            a = s_grid[max(i - 1, 0)]
            b = s_grid[min(i + 1, len(s_grid) - 1)]
            cand = max((float(vals[i]), float(s_grid[i])), _golden_max(g, a, b, tol_s))
            if cand[0] > best_val:
                best_val, best_arg = cand[0], lo + h * exact(cand[1])
    if sampled:
        return NormEnclosure.sampled(best_val), best_arg
    return NormEnclosure.point(best_val), best_arg


# ---------------------------------------------------------------- public operations


def evaluate(f: RealFn, x) -> float:
    return f.eval(x)


def sup_norm(f: RealFn, *, use_known: bool = True) -> NormEnclosure:
    """Enclosure of ``sup |f|`` over the domain.

    ``use_known=False`` ignores cached norms at every nesting level and derives
    the enclosure from the pieces themselves.
    """
    return _sup_on(f, f.domain.lo, f.domain.hi, use_known)[0]


def argmax_abs(f: RealFn) -> Fraction:
    """A point where ``|f|`` attains (or, when sampled, nearly attains) its sup."""
    enc, arg = _sup_on(f, f.domain.lo, f.domain.hi, use_known=False)
    return f.domain.lo if arg is None else arg


def transplant(f: RealFn, target: Interval) -> RealFn:
    """``g = f o tau`` on ``target`` with ``tau`` the increasing affine map onto ``f.domain``."""
    if not isinstance(target, Interval):
        target = Interval(*target)
    norm = sup_norm(f)
    form = Transplant(f, target.lo, target.hi)
    support = None
    if f.support is not None:
        support = Interval(form.tau_inv(f.support.lo), form.tau_inv(f.support.hi))
    return RealFn(target, ((target, form),), norm.lower if norm.exact else None,
                  support, f"{f.label}@{target}")


def fn_equal_sampled(f: RealFn, g: RealFn, tol: float) -> bool:
    """``|f - g| <= tol`` at 257 equispaced points and every breakpoint of either."""
    if f.domain != g.domain:
        raise DomainError(f"domains differ: {f.domain} vs {g.domain}")
    pts = set(f.domain.grid(257)) | set(f.breakpoints()) | set(g.breakpoints())
    return all(abs(f._value_exact(x) - g._value_exact(x)) <= tol for x in pts)


# ---------------------------------------------------------------- builders


def zero_fn(domain: Interval = UNIT) -> RealFn:
    return RealFn(domain, ((domain, Zero()),), 0.0, None, "0")


def line(x0, y0, x1, y1) -> Affine:
    return Affine(exact(x0), exact(y0), exact(x1), exact(y1))


def affine(slope: float, intercept: float, domain: Interval = UNIT) -> RealFn:
    m, c = exact(slope), exact(intercept)
    form = Affine(domain.lo, m * domain.lo + c, domain.hi, m * domain.hi + c)
    return RealFn(domain, ((domain, form),), None, None, f"{float(m):g}x+{float(c):g}")


def constant(value: float, domain: Interval = UNIT) -> RealFn:
    if value == 0:
        return zero_fn(domain)
    return RealFn(domain, ((domain, line(domain.lo, value, domain.hi, value)),),
                  abs(float(value)), None, f"{float(value):g}")


def power(c: float, domain: Interval = UNIT) -> RealFn:
    """``x -> ((x - a) / (b - a)) ** c`` on ``domain = [a, b]``."""
    if not c > 0:
        raise ParameterError(f"power exponent must be positive, got {c}")
    return RealFn(domain, ((domain, Power(float(c), domain.lo, domain.hi)),), 1.0,
                  None, f"t^{float(c):g}")


def exp_fn(c: float, domain: Interval = UNIT) -> RealFn:
    return RealFn(domain, ((domain, Exp(float(c))),), None, None, f"exp({float(c):g}x)")


def classic_bump(n: int) -> RealFn:
    """``sin^2(2^(n+1) pi x) / n`` on ``(2^-(n+1), 2^-n)``, zero elsewhere in [0, 1]."""
    if n < 1:
        raise ParameterError("bump index starts at 1")
    lo, hi = Fraction(1, 2 ** (n + 1)), Fraction(1, 2 ** n)
    pieces = [(Interval(0, lo), Zero()), (Interval(lo, hi), SinSqBump(n))]
    if hi < 1:
        pieces.append((Interval(hi, 1), Zero()))
    return RealFn(UNIT, tuple(pieces), 1.0 / n, Interval(lo, hi), f"bump{n}")


def scaled_sum(terms: Sequence, domain: Optional[Interval] = None) -> RealFn:
    """``sum(c_i * f_i)`` over a shared domain; zero coefficients are dropped."""
    terms = [(float(c), f) for c, f in terms]
    if domain is None:
        if not terms:
            raise DomainError("empty sum needs an explicit domain")
        domain = terms[0][1].domain
    if any(f.domain != domain for _, f in terms):
        raise DomainError("scaled_sum terms must share one domain")
    live = [(c, f) for c, f in terms if c != 0.0 and not f.is_structurally_zero]
    if not live:
        return zero_fn(domain)
    if len(live) == 1:
        return live[0][1].scale(live[0][0])
    support = None
    if all(f.support is not None for _, f in live):
        support = Interval(min(f.support.lo for _, f in live), max(f.support.hi for _, f in live))
    label = " + ".join(f"{c:g}*{f.label}" for c, f in live)
    return RealFn(domain, ((domain, ScaledSum(tuple(live))),), None, support, f"({label})")


def product(factors: Sequence) -> RealFn:
    """``prod(f_i ** k_i)`` over a shared domain."""
    factors = [(f, int(k)) for f, k in factors if int(k) != 0]
    if not factors:
        raise ParameterError("empty product")
    if any(k < 0 for _, k in factors):
        raise ParameterError("product exponents must be positive")
    domain = factors[0][0].domain
    if any(f.domain != domain for f, _ in factors):
        raise DomainError("product factors must share one domain")
    if any(f.is_structurally_zero for f, _ in factors):
        return zero_fn(domain)
    if len(factors) == 1 and factors[0][1] == 1:
        return factors[0][0]
    known = None
    if len(factors) == 1 and factors[0][0].known_sup_norm is not None:
        known = factors[0][0].known_sup_norm ** factors[0][1]
    support = None
    sups = [f.support for f, _ in factors if f.support is not None]
    if sups:
        lo, hi = max(s.lo for s in sups), min(s.hi for s in sups)
        if lo < hi:
            support = Interval(lo, hi)
    label = "*".join(f.label if k == 1 else f"{f.label}^{k}" for f, k in factors)
    return RealFn(domain, ((domain, Product(tuple(factors))),), known, support, label)
