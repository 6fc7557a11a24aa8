"""Concrete function sequences: the dyadic sin^2 bumps and the block transplant operator.

``build_jlambda`` turns a function ``f`` on ``[a, b]`` into the sequence whose
n-th term lives on the block ``[alpha_{3n-2}, alpha_{3n+1}]`` of a partition:
a ramp up to ``f(a)``, a rescaled copy of ``f``, a ramp down from ``f(b)``.
Every term has the same sup norm as ``f`` and the blocks are disjoint, which
is what the family-F certificate records.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .errors import DomainError, ParameterError
from .realfn import (
    UNIT, Interval, NormEnclosure, RealFn, Transplant, Zero, classic_bump, exact,
    line, sup_norm, zero_fn,
)
from .scalarseq import ScalarSeq, constant_seq, make_power, zero_seq

DEFAULT_DEPTH = 20
SAMPLE_POINTS = 1025

JLAMBDA_TAG = "J-blocks: supp(u_n) inside (alpha_{3n-2}, alpha_{3n+1})"
DYADIC_TAG = "dyadic blocks: supp(f_n) inside (2^-(n+1), 2^-n)"


@dataclass(frozen=True, eq=False)
class Partition:
    """Strictly increasing ``alpha_1 = a < alpha_2 < ... -> b`` on ``interval = [a, b]``."""

    interval: Interval
    gen: Callable[[int], Fraction]
    label: str = "custom"
    structural: bool = False

    def __post_init__(self):
        cache: dict = {}
        object.__setattr__(self, "_cache", cache)
        if self.alpha(1) != self.interval.lo:
            raise ParameterError("a partition must start at the left endpoint")

    def alpha(self, k: int) -> Fraction:
        if k < 1:
            raise ParameterError("partition indices start at 1")
        v = self._cache.get(k)
        if v is None:
            v = self._cache[k] = exact(self.gen(k))
        return v

    __call__ = alpha

    def block(self, n: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """``(alpha_{3n-2}, alpha_{3n-1}, alpha_{3n}, alpha_{3n+1})``."""
        return tuple(self.alpha(3 * n + d) for d in (-2, -1, 0, 1))

    def check(self, depth: int) -> None:
        """Spot-check monotonicity up to ``alpha_{3 depth + 1}`` and that it stays below ``b``."""
        prev = self.alpha(1)
        for k in range(2, 3 * depth + 2):
            cur = self.alpha(k)
            if not cur > prev:
                raise ParameterError(f"partition not strictly increasing at index {k}")
            prev = cur
        if not prev < self.interval.hi:
            raise ParameterError("partition reaches the right endpoint")


def default_partition(interval: Interval = UNIT) -> Partition:
    """``alpha_n = b - (b - a) 2^(1 - n)``."""
    a, b = interval.lo, interval.hi
    w = interval.width

    def gen(n: int) -> Fraction:
        return a if n == 1 else b - w / 2 ** (n - 1)

    return Partition(interval, gen, "geometric", structural=True)


@dataclass(frozen=True)
class FamilyFCert:
    """Pairwise disjoint supports with norms in ``[L, M]``, ``0 < L <= M < inf``."""

    disjoint_supports: str
    L: float
    M: float
    structural: bool = True
    depth: Optional[int] = None

    def __post_init__(self):
        if not (0 < self.L <= self.M < float("inf")):
            raise ValueError(f"family-F bounds violated: L={self.L}, M={self.M}")

    def to_dict(self) -> dict:
        return {"disjoint_supports": self.disjoint_supports, "L": self.L, "M": self.M,
                "structural": self.structural, "depth": self.depth}


@dataclass(frozen=True, eq=False)
class FnSeq:
    """Lazily generated ``(F_n)_{n >= 1}`` on a shared domain, with structural metadata.

    ``supports(n)`` bounds the support of ``F_n`` and ``disjoint_tag`` names the
    structural reason those bounds are pairwise disjoint from index
    ``disjoint_from`` on.  ``norm_seq`` gives ``||F_n|| = |norm_seq(n)|`` exactly
    for ``n >= norm_from``, times ``norm_scale`` when that enclosure is set.  ``vanishes_from`` marks ``F_n = 0`` for all larger ``n``.
    """

    domain: Interval
    gen: Callable[[int], RealFn]
    label: str = "F"
    supports: Optional[Callable[[int], Optional[Interval]]] = None
    disjoint_tag: Optional[str] = None
    disjoint_from: int = 1
    norm_seq: Optional[ScalarSeq] = None
    norm_from: int = 1
    norm_scale: Optional[NormEnclosure] = None
    vanishes_from: Optional[int] = None
    f_cert: Optional[FamilyFCert] = None
    provenance: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "_terms", {})

    def term(self, n: int) -> RealFn:
        if n < 1:
            raise ParameterError("sequence indices start at 1")
        f = self._terms.get(n)
        if f is None:
            if self.vanishes_from is not None and n >= self.vanishes_from:
                f = zero_fn(self.domain)
            else:
                f = self.gen(n)
                if f.domain != self.domain:
                    raise DomainError(f"term {n} lives on {f.domain}, not {self.domain}")
            self._terms[n] = f
        return f

    __getitem__ = term

    def support(self, n: int) -> Optional[Interval]:
        if self.supports is not None:
            return self.supports(n)
        return self.term(n).support

    def norm(self, n: int) -> NormEnclosure:
        if self.vanishes_from is not None and n >= self.vanishes_from:
            return NormEnclosure.point(0.0)
        if self.norm_seq is not None and n >= self.norm_from:
            k = abs(self.norm_seq.term(n))
            return NormEnclosure.point(k) if self.norm_scale is None else self.norm_scale.scaled(k)
        return sup_norm(self.term(n))

    def partial_norm_sum(self, N: int) -> float:
        """``sum_{n <= N} ||F_n||`` (lower enclosure ends where norms are not closed-form)."""
        import math

        if self.vanishes_from is not None:
            N = min(N, self.vanishes_from - 1)
        if N < 1:
            return 0.0
        head = min(N, self.norm_from - 1) if self.norm_seq is not None else N
        parts = [self.norm(n).lower for n in range(1, head + 1)]
        if self.norm_seq is not None and N >= self.norm_from:
            vals = abs(self.norm_seq.terms(N)[self.norm_from - 1:])
            tail = math.fsum(vals)
            parts.append(tail if self.norm_scale is None else tail * self.norm_scale.lower)
        return math.fsum(parts)

    def with_(self, **changes) -> "FnSeq":
        from dataclasses import replace

        return replace(self, **changes)

    def __repr__(self) -> str:
        return f"FnSeq({self.label})"


def from_terms(terms: Sequence[RealFn], domain: Optional[Interval] = None, label: str = "G") -> FnSeq:
    """The finitely supported sequence ``(f_1, ..., f_k, 0, 0, ...)``."""
    terms = list(terms)
    if domain is None:
        if not terms:
            raise ParameterError("empty term list needs a domain")
        domain = terms[0].domain
    end = max((i + 1 for i, f in enumerate(terms) if not f.is_structurally_zero), default=0)
    kept = terms[:end]
    return FnSeq(domain, lambda n: kept[n - 1], label, vanishes_from=end + 1,
                 provenance={"origin": "finite", "length": end})


def zero_sequence(domain: Interval = UNIT) -> FnSeq:
    return FnSeq(domain, lambda n: zero_fn(domain), "0", vanishes_from=1,
                 norm_seq=zero_seq(), provenance={"origin": "zero"})


def _jlambda_term(partition: Partition, f: RealFn, n: int, known: Optional[float]) -> RealFn:
    dom = partition.interval
    p0, p1, p2, p3 = partition.block(n)
    fa, fb = exact(f.value_at_lo), exact(f.value_at_hi)
    pieces = []
    if p0 > dom.lo:
        pieces.append((Interval(dom.lo, p0), Zero()))
    pieces.append((Interval(p0, p1), line(p0, 0, p1, fa)))
    pieces.append((Interval(p1, p2), Transplant(f, p1, p2)))
    pieces.append((Interval(p2, p3), line(p2, fb, p3, 0)))
    pieces.append((Interval(p3, dom.hi), Zero()))
    return RealFn(dom, tuple(pieces), known, Interval(p0, p3), f"u{n}[{f.label}]")


def build_jlambda(partition: Partition, f: RealFn) -> FnSeq:
    """``J_Lambda(f)``: block bumps carrying rescaled copies of ``f``.

    The zero function maps to the null sequence.
    """
    if f.domain != partition.interval:
        raise DomainError(f"f lives on {f.domain}, partition on {partition.interval}")
    norm = sup_norm(f)
    if norm.upper == 0.0 or f.is_structurally_zero:
        return zero_sequence(f.domain).with_(provenance={"origin": "jlambda", "partition": partition, "f": f})
    known = norm.lower if norm.exact else None
    f_cert = FamilyFCert(JLAMBDA_TAG, norm.lower, norm.upper, structural=True)
    return FnSeq(
        f.domain,
        lambda n: _jlambda_term(partition, f, n, known),
        f"J[{f.label}]",
        supports=lambda n: Interval(partition.alpha(3 * n - 2), partition.alpha(3 * n + 1)),
        disjoint_tag=JLAMBDA_TAG,
        norm_seq=constant_seq(norm.lower if norm.exact else 1.0),
        norm_scale=None if norm.exact else norm,
        f_cert=f_cert,
        provenance={"origin": "jlambda", "partition": partition, "f": f, "norm": norm},
    )


def classic_example() -> FnSeq:
    """``f_n = sin^2(2^(n+1) pi x) / n`` on ``(2^-(n+1), 2^-n)``; norms ``1/n`` (harmonic)."""
    return FnSeq(
        UNIT,
        classic_bump,
        "classic",
        supports=lambda n: Interval(Fraction(1, 2 ** (n + 1)), Fraction(1, 2 ** n)),
        disjoint_tag=DYADIC_TAG,
        norm_seq=make_power(1),
        provenance={"origin": "classic", "norm_reason": "harmonic norms 1/n"},
    )


@dataclass(frozen=True)
class FamilyFReport:
    """Outcome of ``check_family_f``: a certificate, or the reason there is none."""

    depth: int
    L: float
    M: float
    certificate: Optional[FamilyFCert] = None
    failure: Optional[str] = None
    witness: Optional[tuple] = None
    depth_limited: bool = False

    @property
    def ok(self) -> bool:
        return self.certificate is not None

    def to_dict(self) -> dict:
        return {
            "depth": self.depth, "L": self.L, "M": self.M, "ok": self.ok,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "failure": self.failure,
            "witness": None if self.witness is None else [self.witness[0], self.witness[1], float(self.witness[2])],
            "depth_limited": self.depth_limited,
        }


def _overlap_witness(f: RealFn, g: RealFn, region: Interval) -> Optional[Fraction]:
    """A point of ``region`` where both functions are nonzero (midpoint first, then a grid)."""
    for x in [region.midpoint] + region.grid(SAMPLE_POINTS):
        if f._value_exact(x) != 0.0 and g._value_exact(x) != 0.0:
            return x
    return None


def check_family_f(u: FnSeq, depth: int = DEFAULT_DEPTH) -> FamilyFReport:
    """Check disjoint supports and norm bounds for ``n <= depth``.

    Support metadata decides disjointness; sampling can only find overlaps.  A
    certificate is issued only when a structural tag covers all ``n``.
    """
    if depth < 2:
        raise ParameterError("depth must be at least 2")
    norms = [u.norm(n) for n in range(1, depth + 1)]
    L = min(e.lower for e in norms)
    M = max(e.upper for e in norms)
    for n in range(1, depth + 1):
        for m in range(n + 1, depth + 1):
            sn, sm = u.support(n), u.support(m)
            if sn is not None and sm is not None and not sn.overlaps(sm):
                continue
            region = u.domain
            if sn is not None and sm is not None:
                region = Interval(max(sn.lo, sm.lo), min(sn.hi, sm.hi))
            elif sn is not None or sm is not None:
                region = sn if sn is not None else sm
            x = _overlap_witness(u.term(n), u.term(m), region)
            if x is not None:
                return FamilyFReport(depth, L, M, failure=f"supports of terms {n} and {m} overlap",
                                     witness=(n, m, x))
            if sn is None or sm is None or u.disjoint_tag is None:
                return FamilyFReport(depth, L, M, failure="disjointness not established by metadata",
                                     depth_limited=True)
    if L <= 0.0:
        return FamilyFReport(depth, L, M, failure="a term vanishes: norms not uniformly far from zero")
    if u.norm_seq is not None and u.norm_seq.cert.in_c0.yes and u.vanishes_from is None:
        return FamilyFReport(depth, L, M, failure=(
            f"norms tend to zero ({u.norm_seq.label}); uniformly far from zero violated, "
            f"L <= {L:.17g} at depth {depth}"))
    if u.f_cert is not None and u.f_cert.structural and u.disjoint_tag is not None:
        cert = FamilyFCert(u.disjoint_tag, u.f_cert.L, u.f_cert.M, True, depth)
        return FamilyFReport(depth, L, M, certificate=cert)
    return FamilyFReport(depth, L, M, failure="no structural tail tag: result holds to depth only",
                         depth_limited=True)
