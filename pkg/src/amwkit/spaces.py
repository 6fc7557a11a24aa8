"""Linear structure inside the AMW sequences.

Product families ``(a_n u_n)`` built three ways (scalars vary, functions vary,
or ``f`` varies through the block transplant), the isometry of the block
transplant, the norm identity for spaceable combinations and a numeric rank
check for finite linear independence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .construct import DEFAULT_DEPTH, FnSeq, Partition, build_jlambda, zero_sequence
from .errors import ParameterError, PreconditionError
from .realfn import NormEnclosure, RealFn, scaled_sum, sup_norm
from .scalarseq import Constant, ScalarSeq, combination, scaled, seq_product
from .series import AMWCertificate, certify_amw

RANK_TOL = 1e-10
FIXED_U = "fixed_u"
FIXED_A = "fixed_a"
SPACEABLE = "spaceable"


def scale_product(a: ScalarSeq, u: FnSeq) -> FnSeq:
    """``(a_n u_n)_n`` with support, disjointness and norm metadata carried over."""
    end = a.support_end
    if end == 1 or u.vanishes_from == 1:
        return zero_sequence(u.domain).with_(provenance={"origin": "product", "scalar": a, "base": u})
    ends = [e for e in (end, u.vanishes_from) if e is not None]
    norm_seq = None
    if u.norm_seq is not None:
        if isinstance(u.norm_seq.kind, Constant):
            norm_seq = scaled(u.norm_seq.kind.value, a)
        else:
            norm_seq = seq_product([(a, 1), (u.norm_seq, 1)])
    return FnSeq(
        u.domain,
        lambda n: u.term(n).scale(a.term(n)),
        f"({a.label})*{u.label}",
        supports=u.support,
        disjoint_tag=u.disjoint_tag,
        disjoint_from=u.disjoint_from,
        norm_seq=norm_seq,
        norm_from=u.norm_from,
        norm_scale=u.norm_scale,
        vanishes_from=min(ends) if ends else None,
        provenance={"origin": "product", "scalar": a, "base": u},
    )


def _jlambda_parts(u: FnSeq):
    prov = u.provenance
    if prov.get("origin") == "jlambda":
        return prov["partition"], prov["f"]
    return None


def _partition_of(F: FnSeq) -> Optional[Partition]:
    prov = F.provenance
    if "partition" in prov:
        return prov["partition"]
    if "base" in prov:
        return _partition_of(prov["base"])
    return None


def _sum_sequence(seqs: Sequence[FnSeq], coeffs: Sequence, label: str) -> FnSeq:
    """Termwise linear combination without structural metadata."""
    pairs = [(float(c), s) for c, s in zip(coeffs, seqs) if c != 0]
    dom = seqs[0].domain
    if not pairs:
        return zero_sequence(dom)
    return FnSeq(dom, lambda n: scaled_sum([(c, s.term(n)) for c, s in pairs], dom), label,
                 provenance={"origin": "sum"})


@dataclass(frozen=True)
class CombinationReport:
    coeffs: tuple
    certificate: AMWCertificate
    structural: bool

    @property
    def affirmed(self) -> bool:
        return self.certificate.affirmed

    @property
    def depth_limited(self) -> bool:
        return not self.structural

    def to_dict(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "structural": self.structural,
                "certificate": self.certificate.to_dict()}


@dataclass(frozen=True, eq=False)
class ProductFamily:
    """Generators ``(a^i_n u^i_n)_n`` sharing one domain."""

    mode: str
    generators: tuple
    scalars: tuple = ()
    bases: tuple = ()
    partition: Optional[Partition] = None
    fs: tuple = ()
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.generators)

    def combine(self, coeffs: Sequence) -> tuple[FnSeq, bool]:
        """``sum(c_i gen_i)`` and whether it was rebuilt with structural metadata."""
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != len(self.generators):
            raise ParameterError(f"{len(coeffs)} coefficients for {len(self.generators)} generators")
        if self.mode == FIXED_U:
            a = combination(list(zip(coeffs, self.scalars)))
            return scale_product(a, self.bases[0]), True
        parts = [_jlambda_parts(u) for u in self.bases]
        if all(p is not None for p in parts) and len({id(p[0]) for p in parts}) == 1:
            Lam = parts[0][0]
            f = scaled_sum([(c, p[1]) for c, p in zip(coeffs, parts)], Lam.interval)
            a = self.scalars[0]
            return scale_product(a, build_jlambda(Lam, f)), True
        return _sum_sequence(self.generators, coeffs, "combo"), False

    def certify_combination(self, coeffs: Sequence) -> CombinationReport:
        F, structural = self.combine(coeffs)
        return CombinationReport(tuple(Fraction(c) for c in coeffs), certify_amw(F), structural)


def _require_f(u: FnSeq) -> None:
    if u.f_cert is None:
        raise PreconditionError(f"{u.label} carries no family-F certificate")


def _require_eligible(a: ScalarSeq) -> None:
    if not a.eligible:
        raise PreconditionError(f"{a.label} is not certified in c0 minus l1 "
                                f"(c0: {a.cert.in_c0.status}, l1: {a.cert.in_l1.status})")


def build_thm31_family(basis: Sequence[ScalarSeq], u: FnSeq) -> ProductFamily:
    """Scalars vary over an eligible basis, ``u`` is fixed in family F."""
    _require_f(u)
    for a in basis:
        _require_eligible(a)
    gens = tuple(scale_product(a, u) for a in basis)
    return ProductFamily(FIXED_U, gens, tuple(basis), (u,), _partition_of(u),
                         provenance={"u": u.label, "basis": [a.label for a in basis]})


def build_thm32_family(a: ScalarSeq, us: Sequence[FnSeq]) -> ProductFamily:
    """``a`` fixed, the function sequences vary; zero terms of ``a`` are allowed."""
    _require_eligible(a)
    for u in us:
        _require_f(u)
    gens = tuple(scale_product(a, u) for u in us)
    return ProductFamily(FIXED_A, gens, (a,), tuple(us),
                         provenance={"a": a.label, "us": [u.label for u in us]})


def build_spaceable_family(partition: Partition, a: ScalarSeq, fs: Sequence[RealFn]) -> ProductFamily:
    """Generators ``(a_n J(f_i)_n)`` for the nonzero ``f_i``."""
    _require_eligible(a)
    kept = [f for f in fs if not (f.is_structurally_zero or sup_norm(f).upper == 0.0)]
    us = tuple(build_jlambda(partition, f) for f in kept)
    gens = tuple(scale_product(a, u) for u in us)
    return ProductFamily(SPACEABLE, gens, (a,), us, partition, tuple(kept),
                         provenance={"a": a.label, "fs": [f.label for f in kept]})


@dataclass(frozen=True)
class IsometryEntry:
    label: str
    f_norm: NormEnclosure
    seq_norm: NormEnclosure
    passed: bool

    def to_dict(self) -> dict:
        return {"f": self.label, "f_norm": self.f_norm.to_dict(),
                "seq_norm": self.seq_norm.to_dict(), "passed": self.passed}


@dataclass(frozen=True)
class IsometryReport:
    depth: int
    entries: tuple

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_dict(self) -> dict:
        return {"depth": self.depth, "passed": self.passed, "entries": [e.to_dict() for e in self.entries]}


def isometry_check(partition: Partition, fs: Sequence[RealFn], depth: int = DEFAULT_DEPTH) -> IsometryReport:
    """``max_{n <= depth} ||J(f)_n|| = ||f||``, both sides recomputed from the pieces."""
    entries = []
    for f in fs:
        fn = sup_norm(f, use_known=False)
        u = build_jlambda(partition, f)
        seq = NormEnclosure.join([sup_norm(u.term(n), use_known=False) for n in range(1, depth + 1)])
        entries.append(IsometryEntry(f.label, fn, seq, fn.intersects(seq)))
    return IsometryReport(depth, tuple(entries))


@dataclass(frozen=True)
class NormIdentityReport:
    lhs: NormEnclosure
    rhs: NormEnclosure
    L: float
    argmax: int
    argmax_exact: bool
    depth: int
    tol: float

    @property
    def covered(self) -> bool:
        return self.argmax <= self.depth

    @property
    def agree(self) -> bool:
        return abs(self.lhs.value - self.rhs.value) <= self.tol or self.lhs.intersects(self.rhs, self.tol)

    def to_dict(self) -> dict:
        return {"lhs": self.lhs.to_dict(), "rhs": self.rhs.to_dict(), "L": self.L,
                "argmax": self.argmax, "argmax_exact": self.argmax_exact, "depth": self.depth,
                "covered": self.covered, "agree": self.agree}


def remark37_norm(partition: Partition, a: ScalarSeq, fs: Sequence[RealFn], coeffs: Sequence,
                  depth: int = DEFAULT_DEPTH, tol: float = 1e-9) -> NormIdentityReport:
    """``sup_n ||sum_i l_i a_n J(f_i)_n||`` against ``max|a_n| * ||sum_i l_i f_i||``."""
    if len(fs) != len(coeffs):
        raise ParameterError(f"{len(coeffs)} coefficients for {len(fs)} functions")
    dom = partition.interval
    us = [build_jlambda(partition, f) for f in fs]
    pairs = [(float(c), u) for c, u in zip(coeffs, us) if c != 0]
    encs = []
    for n in range(1, depth + 1):
        an = a.term(n)
        term = scaled_sum([(c * an, u.term(n)) for c, u in pairs], dom)
        encs.append(sup_norm(term, use_known=False))
    lhs = NormEnclosure.join(encs)
    sup = a.sup_abs()
    g = scaled_sum([(c, f) for c, f in zip(coeffs, fs)], dom)
    rhs = sup_norm(g, use_known=False).scaled(sup.value)
    return NormIdentityReport(lhs, rhs, sup.value, sup.argmax, sup.exact, depth, tol)


def _sample_points(F: FnSeq, n: int, per_term: int) -> list:
    Lam = _partition_of(F)
    if Lam is not None:
        lo, hi = Lam.alpha(3 * n - 1), Lam.alpha(3 * n)
    else:
        region = F.support(n) or F.domain
        lo, hi = region.lo, region.hi
        per_term = max(per_term, 5)
    return [lo + (hi - lo) * Fraction(i, per_term + 1) for i in range(1, per_term + 1)]


def _pivoted_rank(A: np.ndarray, rtol: float = RANK_TOL) -> int:
    A = np.array(A, dtype=float)
    if A.size == 0:
        return 0
    scale = float(np.max(np.abs(A)))
    if scale == 0.0:
        return 0
    rank = 0
    rows, cols = A.shape
    for k in range(min(rows, cols)):
        sub = np.abs(A[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= rtol * scale:
            break
        i += k
        j += k
        A[[k, i]] = A[[i, k]]
        A[:, [k, j]] = A[:, [j, k]]
        A[k + 1:] -= np.outer(A[k + 1:, k] / A[k, k], A[k])
        rank += 1
    return rank


def independence_rank(generators: Sequence[FnSeq], sample_depth: int = 6, points_per_term: int = 3) -> int:
    """Numerical rank of ``[gen_i(n)(x)]`` over transplant-interval sample points."""
    if not generators:
        raise ParameterError("need at least one generator")
    cols = [(n, x) for n in range(1, sample_depth + 1)
            for x in _sample_points(generators[0], n, points_per_term)]
    M = np.array([[g.term(n)._value_exact(x) for n, x in cols] for g in generators])
    return _pivoted_rank(M)


def is_nonzero_sampled(F: FnSeq, depth: int = DEFAULT_DEPTH, tol: float = 0.0) -> bool:
    """Some sampled ``|F_n(x)| > tol`` for ``n <= depth``."""
    for n in range(1, depth + 1):
        for x in _sample_points(F, n, 3):
            if abs(F.term(n)._value_exact(x)) > tol:
                return True
    return False


__all__ = [
    "CombinationReport", "IsometryReport", "NormIdentityReport", "ProductFamily",
    "build_spaceable_family", "build_thm31_family", "build_thm32_family", "independence_rank",
    "is_nonzero_sampled", "isometry_check", "remark37_norm", "scale_product",
]
