"""Scalar sequences with structural membership certificates for c0, l1 and the union of lp.

A certificate is derived from how a sequence was built, never from its
numbers.  Power sequences ``n^-c``, log sequences ``ln^-c(n+1)``, constants,
their products and nonzero scalings all reduce to monomials
``k * n^-C * ln^-E(n+1)``; a finite linear combination of monomials behaves
like its dominant monomial (smallest ``(C, E)`` in lexicographic order).
Anything that does not reduce this way is reported ``unknown``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import ParameterError, PreconditionError
from .poly import PolyNoConst

YES, NO, UNKNOWN = "yes", "no", "unknown"
SUP_SEARCH_LIMIT = 10 ** 6
SANITY_N = 10 ** 5
SANITY_MIN_SUM = 3.0


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str = ""

    def __post_init__(self):
        if self.status not in (YES, NO, UNKNOWN):
            raise ValueError(f"bad verdict {self.status!r}")

    @property
    def yes(self) -> bool:
        return self.status == YES

    @property
    def no(self) -> bool:
        return self.status == NO

    @property
    def unknown(self) -> bool:
        return self.status == UNKNOWN

    def to_dict(self) -> dict:
        return {"status": self.status, "reason": self.reason}


@dataclass(frozen=True)
class MembershipCert:
    """Membership verdicts; ``l1 <= union lp <= c0`` is enforced on construction."""

    in_c0: Verdict
    in_l1: Verdict
    in_union_lp: Verdict

    def __post_init__(self):
        chain = [self.in_l1, self.in_union_lp, self.in_c0]
        for small, big in zip(chain, chain[1:]):
            if small.yes and big.no:
                raise ValueError(f"inconsistent certificate: {self}")

    @classmethod
    def closed(cls, c0: Verdict, l1: Verdict, lp: Verdict) -> "MembershipCert":
        """Fill unknown fields implied by the inclusions l1 in lp in c0."""
        if l1.yes and lp.unknown:
            lp = Verdict(YES, f"implied by l1 membership ({l1.reason})")
        if lp.yes and c0.unknown:
            c0 = Verdict(YES, f"implied by lp membership ({lp.reason})")
        if c0.no and lp.unknown:
            lp = Verdict(NO, f"implied by c0 failure ({c0.reason})")
        if lp.no and l1.unknown:
            l1 = Verdict(NO, f"implied by lp failure ({lp.reason})")
        return cls(c0, l1, lp)

    @classmethod
    def all_yes(cls, reason: str) -> "MembershipCert":
        v = Verdict(YES, reason)
        return cls(v, v, v)

    @property
    def eligible(self) -> bool:
        """In c0 but not in l1: the scalars that turn a family-F sequence into an AMW one."""
        return self.in_c0.yes and self.in_l1.no

    def prefixed(self, prefix: str) -> "MembershipCert":
        return MembershipCert(*(Verdict(v.status, f"{prefix}{v.reason}")
                                for v in (self.in_c0, self.in_l1, self.in_union_lp)))

    def to_dict(self) -> dict:
        return {"c0": self.in_c0.to_dict(), "l1": self.in_l1.to_dict(),
                "union_lp": self.in_union_lp.to_dict(), "eligible": self.eligible}


def _monomial_cert(C: float, E: float) -> MembershipCert:
    name = _monomial_name(C, E)
    if C == 0 and E == 0:
        return MembershipCert.closed(Verdict(NO, "terms tend to a nonzero constant"),
                                     Verdict(UNKNOWN), Verdict(UNKNOWN))
    c0 = Verdict(YES, f"{name} -> 0")
    if C > 0:
        lp = Verdict(YES, f"{name} is p-summable for p > {1 / C:.17g}")
    else:
        lp = Verdict(NO, f"{name} exceeds 1/n eventually for every power p")
    if C > 1 or (C == 1 and E > 1):
        l1 = Verdict(YES, f"{name} is summable")
    else:
        l1 = Verdict(NO, f"{name} is not summable (comparison with the harmonic series)")
    return MembershipCert.closed(c0, l1, lp)


def _monomial_name(C: float, E: float) -> str:
    parts = []
    if C:
        parts.append(f"n^-{C:g}")
    if E:
        parts.append(f"ln^-{E:g}(n+1)")
    return "*".join(parts) or "constant"


def _n(N: int) -> np.ndarray:
    return np.arange(1, N + 1, dtype=float)


# ---------------------------------------------------------------- kinds


class Kind:
    name = "kind"

    def term(self, n: int) -> float:
        raise NotImplementedError

    def terms(self, N: int) -> np.ndarray:
        return np.array([self.term(n) for n in range(1, N + 1)], dtype=float)

    def classify(self) -> MembershipCert:
        return MembershipCert(Verdict(UNKNOWN), Verdict(UNKNOWN), Verdict(UNKNOWN))

    def monomial(self):
        return None

    abs_nonincreasing = False

    @property
    def support_end(self) -> Optional[int]:
        return None

    def describe(self) -> dict:
        return {"kind": self.name}


@dataclass(frozen=True, eq=False)
class PowerDecay(Kind):
    c: float
    name = "power_decay"
    abs_nonincreasing = True

    def term(self, n):
        return float(n) ** -self.c

    def terms(self, N):
        return _n(N) ** -self.c

    def monomial(self):
        return Fraction(1), self.c, 0.0

    def classify(self):
        return _monomial_cert(self.c, 0.0)

    def describe(self):
        return {"kind": self.name, "c": self.c}


@dataclass(frozen=True, eq=False)
class LogDecay(Kind):
    """``1 / ln^c(n + 1)``, shifted so the sequence starts at ``n = 1``."""

    c: float
    name = "log_decay"
    abs_nonincreasing = True

    def term(self, n):
        return math.log1p(n) ** -self.c

    def terms(self, N):
        return np.log1p(_n(N)) ** -self.c

    def monomial(self):
        return Fraction(1), 0.0, self.c

    def classify(self):
        return _monomial_cert(0.0, self.c)

    def describe(self):
        return {"kind": self.name, "c": self.c}


@dataclass(frozen=True, eq=False)
class FiniteSupport(Kind):
    values: tuple
    name = "finite_support"

    def term(self, n):
        return float(self.values[n - 1]) if n <= len(self.values) else 0.0

    def terms(self, N):
        out = np.zeros(N)
        k = min(N, len(self.values))
        out[:k] = [float(v) for v in self.values[:k]]
        return out

    @property
    def abs_nonincreasing(self):
        mags = [abs(float(v)) for v in self.values] + [0.0]
        return all(a >= b for a, b in zip(mags, mags[1:]))

    @property
    def support_end(self):
        last = max((i for i, v in enumerate(self.values) if v != 0), default=-1)
        return last + 2

    def classify(self):
        return MembershipCert.all_yes("finitely many nonzero terms")

    def describe(self):
        return {"kind": self.name, "values": [float(v) for v in self.values]}


@dataclass(frozen=True, eq=False)
class ZeroSeq(Kind):
    name = "zero"
    abs_nonincreasing = True

    def term(self, n):
        return 0.0

    def terms(self, N):
        return np.zeros(N)

    @property
    def support_end(self):
        return 1

    def classify(self):
        return MembershipCert.all_yes("zero sequence")


@dataclass(frozen=True, eq=False)
class Constant(Kind):
    value: float
    name = "constant"
    abs_nonincreasing = True

    def term(self, n):
        return float(self.value)

    def terms(self, N):
        return np.full(N, float(self.value))

    @property
    def support_end(self):
        return 1 if self.value == 0 else None

    def monomial(self):
        return Fraction(self.value), 0.0, 0.0

    def classify(self):
        if self.value == 0:
            return MembershipCert.all_yes("zero sequence")
        return _monomial_cert(0.0, 0.0)

    def describe(self):
        return {"kind": self.name, "value": float(self.value)}


@dataclass(frozen=True, eq=False)
class Scaled(Kind):
    factor: Fraction
    base: "ScalarSeq"
    name = "scaled"

    def term(self, n):
        return float(self.factor) * self.base.term(n)

    def terms(self, N):
        return float(self.factor) * self.base.terms(N)

    @property
    def abs_nonincreasing(self):
        return self.factor == 0 or self.base.abs_nonincreasing

    @property
    def support_end(self):
        return 1 if self.factor == 0 else self.base.support_end

    def monomial(self):
        m = self.base.kind.monomial()
        return None if m is None else (self.factor * m[0], m[1], m[2])

    def classify(self):
        if self.factor == 0:
            return MembershipCert.all_yes("zero multiple")
        return self.base.cert.prefixed("nonzero multiple: ")

    def describe(self):
        return {"kind": self.name, "factor": float(self.factor), "base": self.base.describe()}


@dataclass(frozen=True, eq=False)
class Alternating(Kind):
    """``(-1)^n * base_n``."""

    base: "ScalarSeq"
    name = "alternating"

    def term(self, n):
        return (-1.0 if n % 2 else 1.0) * self.base.term(n)

    def terms(self, N):
        sign = np.where(np.arange(1, N + 1) % 2 == 1, -1.0, 1.0)
        return sign * self.base.terms(N)

    @property
    def abs_nonincreasing(self):
        return self.base.abs_nonincreasing

    @property
    def support_end(self):
        return self.base.support_end

    def classify(self):
        return self.base.cert.prefixed("same moduli: ")

    def describe(self):
        return {"kind": self.name, "base": self.base.describe()}


@dataclass(frozen=True, eq=False)
class Combination(Kind):
    """``sum(coef_i * seq_i)``."""

    terms_: tuple
    name = "combination"

    def term(self, n):
        return math.fsum(float(c) * s.term(n) for c, s in self.terms_)

    def terms(self, N):
        out = np.zeros(N)
        for c, s in self.terms_:
            out += float(c) * s.terms(N)
        return out

    @property
    def support_end(self):
        ends = [s.support_end for c, s in self.terms_ if c != 0]
        if any(e is None for e in ends):
            return None
        return max(ends, default=1)

    def _groups(self):
        groups, others = {}, []
        for c, s in self.terms_:
            if c == 0 or s.support_end is not None:
                continue
            m = s.kind.monomial()
            if m is None:
                others.append(s)
                continue
            k, C, E = m
            groups[(C, E)] = groups.get((C, E), Fraction(0)) + Fraction(c) * k
        return {ce: k for ce, k in groups.items() if k != 0}, others

    def monomial(self):
        groups, others = self._groups()
        if others or len(groups) != 1:
            return None
        (C, E), k = next(iter(groups.items()))
        return k, C, E

    def classify(self):
        groups, others = self._groups()
        if others:
            monos = [_monomial_cert(C, E) for C, E in groups]
            certs = [s.cert for s in others] + monos
            def all_yes(attr):
                return all(getattr(c, attr).yes for c in certs)
            c0 = Verdict(YES, "finite sum of null sequences") if all_yes("in_c0") else Verdict(UNKNOWN)
            l1 = Verdict(YES, "finite sum of summable sequences") if all_yes("in_l1") else Verdict(UNKNOWN)
            lp = Verdict(YES, "finite sum of lp sequences") if all_yes("in_union_lp") else Verdict(UNKNOWN)
            return MembershipCert.closed(c0, l1, lp)
        if not groups:
            return MembershipCert.all_yes("all terms cancel beyond finitely many indices")
        C, E = min(groups)
        return _monomial_cert(C, E).prefixed(f"dominant term {_monomial_name(C, E)}: ")

    def describe(self):
        return {"kind": self.name,
                "terms": [[float(c), s.describe()] for c, s in self.terms_]}


@dataclass(frozen=True, eq=False)
class ProductSeq(Kind):
    """Coordinatewise ``prod(seq_i ** k_i)``."""

    factors: tuple
    name = "product"

    def term(self, n):
        out = 1.0
        for s, k in self.factors:
            out *= s.term(n) ** k
        return out

    def terms(self, N):
        out = np.ones(N)
        for s, k in self.factors:
            out *= s.terms(N) ** k
        return out

    @property
    def abs_nonincreasing(self):
        return all(s.abs_nonincreasing for s, _ in self.factors)

    @property
    def support_end(self):
        ends = [s.support_end for s, _ in self.factors if s.support_end is not None]
        return min(ends) if ends else None

    def monomial(self):
        k, C, E = Fraction(1), 0.0, 0.0
        for s, e in self.factors:
            m = s.kind.monomial()
            if m is None:
                return None
            k, C, E = k * m[0] ** e, C + m[1] * e, E + m[2] * e
        return k, C, E

    def classify(self):
        if self.support_end is not None:
            return MembershipCert.all_yes("a factor has finitely many nonzero terms")
        m = self.monomial()
        if m is not None:
            if m[0] == 0:
                return MembershipCert.all_yes("zero multiple")
            return _monomial_cert(m[1], m[2]).prefixed("product monomial: ")
        certs = [s.cert for s, _ in self.factors]
        bounded = all(c.in_c0.yes for c in certs)
        c0 = Verdict(YES, "product of null sequences") if bounded else Verdict(UNKNOWN)
        l1 = Verdict(YES, "summable factor times bounded factors") if bounded and any(c.in_l1.yes for c in certs) else Verdict(UNKNOWN)
        lp = Verdict(YES, "lp factor times bounded factors") if bounded and any(c.in_union_lp.yes for c in certs) else Verdict(UNKNOWN)
        return MembershipCert.closed(c0, l1, lp)

    def describe(self):
        return {"kind": self.name, "factors": [[s.describe(), k] for s, k in self.factors]}


@dataclass(frozen=True, eq=False)
class PolyImage(Kind):
    """``P(base_n)`` for a one-variable polynomial without constant term."""

    base: "ScalarSeq"
    poly: PolyNoConst
    name = "poly_image"

    @property
    def t(self) -> int:
        return self.poly.leading_low_term()[0]

    @property
    def p0(self) -> Fraction:
        return self.poly.leading_low_term()[1]

    def term(self, n):
        return float(self.poly(self.base.term(n)))

    def terms(self, N):
        x = self.base.terms(N)
        out = np.zeros(N)
        for (d,), c in self.poly.terms.items():
            out += float(c) * x ** d
        return out

    @property
    def support_end(self):
        return self.base.support_end

    def classify(self):
        t, p0 = self.poly.leading_low_term()
        why = f"|P(a_n)| / |a_n|^{t} -> |p0| = {float(abs(p0)):.17g} > 0"
        c0 = Verdict(YES, "P is continuous at 0 with P(0) = 0 and a_n -> 0")
        base = self.base.cert
        if base.in_union_lp.no:
            return MembershipCert.closed(
                c0,
                Verdict(NO, f"limit comparison with a^{t}, which lies outside every lp: {why}"),
                Verdict(NO, f"limit comparison with a^{t}, which lies outside every lp: {why}"))
        if base.in_union_lp.yes:
            return MembershipCert.closed(
                c0, Verdict(UNKNOWN),
                Verdict(YES, f"|P(a_n)| <= K |a_n| eventually and a lies in some lp"))
        return MembershipCert.closed(c0, Verdict(UNKNOWN), Verdict(UNKNOWN))

    def describe(self):
        return {"kind": self.name, "poly": str(self.poly), "base": self.base.describe()}


# ---------------------------------------------------------------- ScalarSeq


@dataclass(frozen=True)
class SupAbs:
    value: float
    argmax: int
    exact: bool


@dataclass(frozen=True, eq=False)
class ScalarSeq:
    """A deterministic rule ``n -> a_n`` (``n >= 1``) carrying its membership certificate."""

    kind: Kind
    label: str = "a"
    cert: MembershipCert = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "cert", self.kind.classify())

    def term(self, n: int) -> float:
        if n < 1:
            raise ParameterError("sequences are indexed from 1")
        return self.kind.term(n)

    __call__ = term

    def terms(self, N: int) -> np.ndarray:
        """``a_1, ..., a_N`` as an array."""
        return self.kind.terms(N) if N > 0 else np.zeros(0)

    @property
    def abs_nonincreasing(self) -> bool:
        return bool(self.kind.abs_nonincreasing)

    @property
    def support_end(self) -> Optional[int]:
        """Smallest index from which every term is zero, when that is structural."""
        return self.kind.support_end

    @property
    def eligible(self) -> bool:
        return self.cert.eligible

    def limsup_abs(self) -> Optional[float]:
        if self.cert.in_c0.yes:
            return 0.0
        m = self.kind.monomial()
        if m is not None and m[1] == 0 and m[2] == 0:
            return abs(float(m[0]))
        if isinstance(self.kind, Combination):
            groups, others = self.kind._groups()
            if not others and all(C > 0 or E > 0 for C, E in groups if (C, E) != (0.0, 0.0)):
                return abs(float(groups.get((0.0, 0.0), 0)))
        if isinstance(self.kind, (Scaled, Alternating)):
            inner = self.kind.base.limsup_abs()
            if inner is None:
                return None
            return inner * abs(float(getattr(self.kind, "factor", 1)))
        return None

    def sup_abs(self, n_max: int = SUP_SEARCH_LIMIT) -> SupAbs:
        """``max_n |a_n|``: exact for monotone or finitely supported kinds, else searched up to ``n_max``."""
        if self.abs_nonincreasing:
            return SupAbs(abs(self.term(1)), 1, True)
        end = self.support_end
        if end is not None:
            if end <= 1:
                return SupAbs(0.0, 1, True)
            vals = np.abs(self.terms(end - 1))
            i = int(np.argmax(vals))
            return SupAbs(float(vals[i]), i + 1, True)
        vals = np.abs(self.terms(n_max))
        i = int(np.argmax(vals))
        return SupAbs(float(vals[i]), i + 1, False)

    def describe(self) -> dict:
        return {"label": self.label, **self.kind.describe(), "cert": self.cert.to_dict()}

    def __repr__(self) -> str:
        return f"ScalarSeq({self.label})"


# ---------------------------------------------------------------- constructors


def make_power(c: float) -> ScalarSeq:
    """``a_n = n^-c``."""
    if not c > 0:
        raise ParameterError(f"power decay needs c > 0, got {c}")
    return ScalarSeq(PowerDecay(float(c)), f"n^-{float(c):g}")


def make_logpower(c: float) -> ScalarSeq:
    """``a_n = 1 / ln^c(n + 1)``."""
    if not c > 0:
        raise ParameterError(f"log decay needs c > 0, got {c}")
    return ScalarSeq(LogDecay(float(c)), f"ln^-{float(c):g}(n+1)")


def finite_support(values: Sequence[float]) -> ScalarSeq:
    return ScalarSeq(FiniteSupport(tuple(values)), f"finite{list(values)}")


def zero_seq() -> ScalarSeq:
    return ScalarSeq(ZeroSeq(), "0")


def constant_seq(value: float) -> ScalarSeq:
    return ScalarSeq(Constant(value), f"const({float(value):g})")


def scaled(factor, base: ScalarSeq) -> ScalarSeq:
    f = Fraction(factor)
    return ScalarSeq(Scaled(f, base), f"{float(f):g}*{base.label}")


def alternating(base: ScalarSeq) -> ScalarSeq:
    return ScalarSeq(Alternating(base), f"(-1)^n*{base.label}")


def combination(terms: Sequence) -> ScalarSeq:
    """``sum(coef_i * seq_i)``; coefficients are kept exact for cancellation checks."""
    terms = tuple((Fraction(c), s) for c, s in terms)
    label = " + ".join(f"{float(c):g}*{s.label}" for c, s in terms) or "0"
    return ScalarSeq(Combination(terms), f"({label})")


def seq_product(factors: Sequence) -> ScalarSeq:
    factors = tuple((s, int(k)) for s, k in factors if int(k) > 0)
    if not factors:
        raise ParameterError("empty product")
    label = "*".join(s.label if k == 1 else f"({s.label})^{k}" for s, k in factors)
    return ScalarSeq(ProductSeq(factors), label)


def apply_poly(a: ScalarSeq, P: PolyNoConst) -> ScalarSeq:
    """``b_n = P(a_n)`` with the limit-comparison certificate."""
    if not isinstance(P, PolyNoConst):
        raise ParameterError("P must be a PolyNoConst (nonzero, no constant term)")
    if P.nvars != 1:
        raise ParameterError(f"apply_poly needs a one-variable polynomial, got {P.nvars}")
    if not a.cert.in_c0.yes:
        raise PreconditionError(f"{a.label} is not certified in c0")
    if P.is_identity:
        return a
    return ScalarSeq(PolyImage(a, P), f"P({a.label})")


def classify(a: ScalarSeq) -> MembershipCert:
    return a.kind.classify()


def partial_abs_sum(a: ScalarSeq, N: int) -> float:
    """``sum_{n <= N} |a_n|`` by direct summation."""
    if N < 1:
        raise ParameterError("N must be positive")
    return math.fsum(np.abs(a.terms(N)))


def divergence_suspicious(a: ScalarSeq, N: int = SANITY_N) -> bool:
    """Advisory: a divergence certificate whose partial sums stay tiny probably has a wiring bug."""
    return partial_abs_sum(a, N) < SANITY_MIN_SUM


def eventual_bracket_start(b: ScalarSeq, n_max: int = SUP_SEARCH_LIMIT) -> Optional[int]:
    """Smallest ``N0`` with ``|P(a_n)| / |a_n|^t`` in ``[|p0|/2, 2|p0|]`` for ``N0 <= n <= n_max``."""
    if not isinstance(b.kind, PolyImage):
        raise ParameterError("eventual_bracket_start needs a polynomial image")
    t, p0 = b.kind.t, abs(float(b.kind.p0))
    a = b.kind.base.terms(n_max)
    vals = b.terms(n_max)
    nz = a != 0
    ratio = np.full(n_max, p0)
    ratio[nz] = np.abs(vals[nz]) / np.abs(a[nz]) ** t
    ok = (ratio >= p0 / 2) & (ratio <= 2 * p0)
    if not ok[-1]:
        return None
    bad = np.nonzero(~ok)[0]
    return int(bad[-1]) + 2 if bad.size else 1
