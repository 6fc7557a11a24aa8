"""AMW certification of function series.

A sequence is Anti M-Weierstrass when its series converges absolutely and
uniformly while the series of sup norms diverges.  Divergence is accepted only
from a structural "not in l1" certificate; the numeric partial sums kept in the
sanity record are advisory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .construct import DEFAULT_DEPTH, FnSeq
from .errors import PreconditionError
from .realfn import NormEnclosure, exact
from .scalarseq import ScalarSeq

# sub-certificate kinds
DISJOINT = "disjoint_supports"
TERMWISE = "termwise_abs_summable"
C0_ON_F = "c0_on_F"
TAIL_BOUND = "exact_tail_bound"
STRUCTURAL = "l1_negative_structural"
FAILED = "failed"
UNKNOWN = "unknown"

SANITY_TAIL_N = 100
SANITY_SUM_NS = (10 ** 2, 10 ** 3, 10 ** 4)
SANITY_MIN_NORM_SUM = 5.0


@dataclass(frozen=True)
class SubCert:
    kind: str
    reason: str

    @property
    def failed(self) -> bool:
        return self.kind == FAILED

    @property
    def unknown(self) -> bool:
        return self.kind == UNKNOWN

    def to_dict(self) -> dict:
        return {"kind": self.kind, "reason": self.reason}


@dataclass(frozen=True)
class AMWCertificate:
    absolute: SubCert
    uniform: SubCert
    divergence: SubCert
    sanity: dict = field(default_factory=dict)
    depth: int = DEFAULT_DEPTH
    notes: tuple = ()

    @property
    def affirmed(self) -> bool:
        parts = (self.absolute, self.uniform)
        return (not any(p.failed or p.unknown for p in parts)
                and self.divergence.kind == STRUCTURAL)

    @property
    def status(self) -> str:
        if self.affirmed:
            return "affirmed"
        if any(p.failed for p in (self.absolute, self.uniform, self.divergence)):
            return "failed"
        return "unknown"

    def core(self) -> tuple:
        """The mathematical verdicts, without sanity numbers or notes."""
        return (self.absolute, self.uniform, self.divergence)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "affirmed": self.affirmed,
            "absolute": self.absolute.to_dict(),
            "uniform": self.uniform.to_dict(),
            "divergence": self.divergence.to_dict(),
            "sanity": self.sanity,
            "depth": self.depth,
            "notes": list(self.notes),
        }


def partial_sum_at(F: FnSeq, N: int, x) -> float:
    """``sum_{n <= N} F_n(x)``; ``N = 0`` gives the empty sum."""
    X = exact(x)
    if not (F.domain.lo <= X <= F.domain.hi):
        from .errors import DomainError

        raise DomainError(f"x={float(X)!r} outside {F.domain}")
    return math.fsum(F.term(n)._value_exact(X) for n in range(1, N + 1))


def tail_sup_disjoint(F: FnSeq, N: int, depth: int = DEFAULT_DEPTH) -> NormEnclosure:
    """``sup_x |sum_{n >= N} F_n(x)|``, which equals ``sup_{n >= N} ||F_n||`` for disjoint supports.

    Exact when the norms are structurally known and nonincreasing from ``N`` on
    or the sequence vanishes from ``N``; otherwise the window ``N..max(depth, N)``
    gives a lower bound and the upper end is unbounded.
    """
    if F.disjoint_tag is None:
        raise PreconditionError(f"{F.label} has no disjoint-support certificate")
    if N < F.disjoint_from:
        raise PreconditionError(f"supports are only certified disjoint from n = {F.disjoint_from}")
    if F.vanishes_from is not None and N >= F.vanishes_from:
        return NormEnclosure.point(0.0)
    ns = F.norm_seq
    if ns is not None and N >= F.norm_from and ns.abs_nonincreasing:
        return F.norm(N)
    top = max(depth, N)
    if F.vanishes_from is not None:
        top = min(top, F.vanishes_from - 1)
        encs = [F.norm(n) for n in range(N, top + 1)]
        return NormEnclosure.join(encs)
    encs = [F.norm(n) for n in range(N, top + 1)]
    return NormEnclosure(max(e.lower for e in encs), math.inf, False)


def _sanity(F: FnSeq, divergence: SubCert) -> dict:
    out: dict = {}
    if F.disjoint_tag is not None and SANITY_TAIL_N >= F.disjoint_from:
        t = tail_sup_disjoint(F, SANITY_TAIL_N)
        out["tail_sup_at_100"] = t.lower if math.isfinite(t.upper) else None
    else:
        out["tail_sup_at_100"] = None
    sums = {}
    for N in SANITY_SUM_NS:
        if F.norm_seq is None and F.vanishes_from is None and N > 1000:
            sums[str(N)] = None
            continue
        sums[str(N)] = F.partial_norm_sum(N)
    out["partial_norm_sums"] = sums
    big = sums.get(str(SANITY_SUM_NS[-1]))
    out["warning"] = None
    if divergence.kind == STRUCTURAL and big is not None and big < SANITY_MIN_NORM_SUM:
        out["warning"] = f"norm sum up to {SANITY_SUM_NS[-1]} is only {big:.6g} under a divergence certificate"
    return out


def _scalar_product_path(F: FnSeq, a: ScalarSeq, base: FnSeq, depth: int) -> AMWCertificate:
    fc = base.f_cert
    absolute = SubCert(DISJOINT, f"base sequence in family F ({fc.disjoint_supports}); at most one term is nonzero at any x")
    c0 = a.cert.in_c0
    if c0.yes:
        uniform = SubCert(C0_ON_F, f"scalars in c0 ({c0.reason}) with norms bounded by M = {fc.M:.17g}")
    elif c0.no:
        uniform = SubCert(FAILED, f"scalars not in c0 ({c0.reason}); tail sup >= L limsup|a_n| with L = {fc.L:.17g}")
    else:
        uniform = SubCert(UNKNOWN, "c0 membership of the scalars is undecided")
    l1 = a.cert.in_l1
    if l1.no:
        divergence = SubCert(STRUCTURAL, f"norms >= L|a_n| with L = {fc.L:.17g} and scalars not in l1 ({l1.reason})")
    elif l1.yes:
        divergence = SubCert(FAILED, f"scalars in l1 ({l1.reason}); norms <= M|a_n| are summable, the M-test applies")
    else:
        divergence = SubCert(UNKNOWN, "l1 membership of the scalars is undecided")
    return AMWCertificate(absolute, uniform, divergence, _sanity(F, divergence), depth)


def _norm_path(F: FnSeq, depth: int) -> AMWCertificate:
    reason = F.provenance.get("norm_reason", "")
    ns = F.norm_seq
    if F.vanishes_from is not None:
        fin = "finitely many nonzero terms"
        return AMWCertificate(SubCert(TERMWISE, fin), SubCert(TAIL_BOUND, fin),
                              SubCert(FAILED, f"{fin}: the norm series is a finite sum"),
                              _sanity(F, SubCert(FAILED, "")), depth)
    if F.disjoint_tag is not None and F.disjoint_from == 1:
        absolute = SubCert(DISJOINT, F.disjoint_tag)
    else:
        absolute = SubCert(UNKNOWN, "no disjoint-support certificate")
    if ns is None:
        uniform = SubCert(UNKNOWN, "no structural norm information outside family F")
        divergence = SubCert(UNKNOWN, "no structural norm information")
        return AMWCertificate(absolute, uniform, divergence, _sanity(F, divergence), depth)
    label = reason or f"norms |{ns.label}|"
    if absolute.kind == DISJOINT and ns.cert.in_c0.yes:
        uniform = SubCert(TAIL_BOUND, f"tail sup = sup of remaining norms -> 0 ({label}: {ns.cert.in_c0.reason})")
    elif absolute.kind == DISJOINT and ns.cert.in_c0.no:
        uniform = SubCert(FAILED, f"tail sup = sup of remaining norms does not tend to 0 ({label})")
    else:
        uniform = SubCert(UNKNOWN, "uniform convergence needs disjoint supports and null norms")
    if ns.cert.in_l1.no:
        divergence = SubCert(STRUCTURAL, f"{label}: {ns.cert.in_l1.reason}")
    elif ns.cert.in_l1.yes:
        divergence = SubCert(FAILED, f"{label}: {ns.cert.in_l1.reason}")
    else:
        divergence = SubCert(UNKNOWN, f"{label}: l1 membership undecided")
    return AMWCertificate(absolute, uniform, divergence, _sanity(F, divergence), depth)


def certify_amw(F: FnSeq, scalar_meta: Optional[tuple] = None, depth: int = DEFAULT_DEPTH) -> AMWCertificate:
    """Certificate for ``F``; failures and unknowns are encoded, never raised.

    With ``scalar_meta = (a, base)`` and ``base`` in family F the three
    verdicts follow from the scalars' c0/l1 certificate.  A product built by
    ``scale_product`` carries that pair itself.  Otherwise the structural norm
    sequence of ``F`` is used.
    """
    pert = F.provenance.get("perturbation")
    if pert is not None:
        base_F, n0 = pert
        cert = certify_amw(base_F, depth=depth)
        note = f"perturbed, tail unchanged beyond n = {n0 - 1}"
        return replace(cert, sanity=_sanity(F, cert.divergence), notes=cert.notes + (note,))
    if scalar_meta is None and "scalar" in F.provenance and "base" in F.provenance:
        scalar_meta = (F.provenance["scalar"], F.provenance["base"])
    if scalar_meta is not None:
        a, base = scalar_meta
        if base.f_cert is not None and base.disjoint_tag is not None:
            return _scalar_product_path(F, a, base, depth)
    return _norm_path(F, depth)


@dataclass(frozen=True)
class OracleRow:
    N: int
    tail_sup: NormEnclosure
    direct: float
    agree: bool
    lower_bound: Optional[float]

    def to_dict(self) -> dict:
        return {"N": self.N, "tail_sup": self.tail_sup.to_dict(), "direct": self.direct,
                "agree": self.agree, "lower_bound": self.lower_bound}


@dataclass(frozen=True)
class UniformOracleReport:
    rows: tuple
    in_c0: str
    uniform_converges: Optional[bool]
    consistent: bool

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "in_c0": self.in_c0,
                "uniform_converges": self.uniform_converges, "consistent": self.consistent}


def lemma22_uniform_oracle(u: FnSeq, a: ScalarSeq, N_list: Sequence[int],
                           window: int = 5) -> UniformOracleReport:
    """Cross-check: tail sup of ``(a_n u_n)`` against a direct ``max |a_n| ||u_n||``.

    The direct side builds the actual terms ``u_n`` for ``N <= n < N + window``
    and computes their sup norms from the pieces.  When ``a`` is not null the
    tail sup must stay above ``L limsup |a_n| > 0`` at every ``N``.
    """
    from .spaces import scale_product

    if u.f_cert is None:
        raise PreconditionError(f"{u.label} carries no family-F certificate")
    from .realfn import sup_norm

    F = scale_product(a, u)
    L = u.f_cert.L
    limsup = a.limsup_abs()
    rows = []
    for N in N_list:
        ts = tail_sup_disjoint(F, N)
        direct = max(abs(a.term(n)) * sup_norm(u.term(n), use_known=False).lower
                     for n in range(N, N + window))
        if a.abs_nonincreasing:
            agree = math.isfinite(ts.upper) and ts.contains(direct, 1e-12)
        else:
            agree = ts.lower + 1e-12 >= direct
        lower = None
        if not a.cert.in_c0.yes and limsup is not None:
            lower = L * limsup
            agree = agree and lower > 0 and ts.lower + 1e-12 >= lower
        rows.append(OracleRow(N, ts, direct, agree, lower))
    status = a.cert.in_c0.status
    converges = True if status == "yes" else (False if status == "no" else None)
    return UniformOracleReport(tuple(rows), status, converges, all(r.agree for r in rows))


def c00_perturb(F: FnSeq, G: FnSeq, cert: Optional[AMWCertificate] = None) -> FnSeq:
    """``(F_n + G_n)_n`` for finitely supported ``G``; the certificate of ``F`` carries over."""
    n0 = G.vanishes_from
    if n0 is None:
        raise PreconditionError(f"{G.label} is not structurally finitely supported")
    if G.domain != F.domain:
        from .errors import DomainError

        raise DomainError("F and G live on different domains")
    if n0 <= 1:
        return F
    if cert is None:
        cert = certify_amw(F)

    def gen(n: int):
        return F.term(n) + G.term(n) if n < n0 else F.term(n)

    def supports(n: int):
        return F.support(n) if n >= n0 else None

    return FnSeq(
        F.domain, gen, f"({F.label}+{G.label})",
        supports=supports,
        disjoint_tag=F.disjoint_tag,
        disjoint_from=max(F.disjoint_from, n0),
        norm_seq=F.norm_seq,
        norm_from=max(F.norm_from, n0),
        norm_scale=F.norm_scale,
        vanishes_from=None,
        provenance={"origin": "perturbation", "perturbation": (F, n0), "certificate": cert},
    )
