"""Coordinatewise algebras of AMW sequences.

Two generator systems are built here.  Block-shift generators
``a_n J(gamma_i g_i + 1)_n`` need scalars outside every lp; their polynomial
combinations are certified through the one-variable reduction ``Q`` evaluated
at the block points ``alpha_{3n-1}``.  Scalar-basis generators ``a^i_n u_n``
with ``u_n >= 0`` are certified at the points where ``u_n`` reaches its norm.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .construct import DEFAULT_DEPTH, FnSeq, Partition, build_jlambda
from .errors import ParameterError, PreconditionError
from .poly import Polynomial, PolyNoConst
from .realfn import RealFn, argmax_abs, constant, exact, product, scaled_sum, sup_norm
from .scalarseq import ScalarSeq, apply_poly, combination, seq_product
from .series import (C0_ON_F, DISJOINT, STRUCTURAL, UNKNOWN, AMWCertificate,
                     SubCert)
from .spaces import _sample_points, scale_product

THM43 = "thm43"
THM45 = "thm45"
IDENTITY_TOL = 1e-12
WITNESS_TOL = 1e-10
FREENESS_TOL = 1e-10
NONNEG_POINTS = 101
DIAGONAL_SUM_NS = (10 ** 2, 10 ** 3, 10 ** 4)


def expand_affine(P: Polynomial, alphas: Sequence, betas: Sequence) -> Polynomial:
    """``P(alpha_1 x_1 + beta_1, ...)`` expanded by the binomial coefficient formula.

    Each monomial ``x^j`` contributes ``prod_k C(j_k, l_k) beta_k^l_k alpha_k^(j_k - l_k)``
    to the exponent ``j - l`` for every ``0 <= l <= j``.
    """
    if len(alphas) != P.nvars or len(betas) != P.nvars:
        raise ParameterError(f"need {P.nvars} alphas and betas")
    al = [Fraction(a) for a in alphas]
    be = [Fraction(b) for b in betas]
    if any(a == 0 for a in al):
        raise ParameterError("every alpha must be nonzero")
    out: dict[tuple, Fraction] = {}
    for j, lam in P.terms.items():
        for ls in itertools.product(*(range(jk + 1) for jk in j)):
            c = lam
            for jk, lk, a, b in zip(j, ls, al, be):
                c *= comb(jk, lk) * b ** lk * a ** (jk - lk)
            if c:
                e = tuple(jk - lk for jk, lk in zip(j, ls))
                out[e] = out.get(e, Fraction(0)) + c
    return Polynomial(P.nvars, out)


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """Inputs for one of the two generator systems."""

    mode: str
    partition: Optional[Partition] = None
    a: Optional[ScalarSeq] = None
    gs: tuple = ()
    scalar_basis: tuple = ()
    u: Optional[FnSeq] = None


@dataclass(frozen=True, eq=False)
class AlgebraGenerators(Sequence):
    """Generator sequences plus what certification needs to know about them."""

    spec: AlgebraSpec
    generators: tuple
    gammas: tuple = ()
    deltas: tuple = ()
    shifted: tuple = ()
    L: Optional[float] = None

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    @property
    def mode(self) -> str:
        return self.spec.mode


def build_thm43(spec: AlgebraSpec) -> AlgebraGenerators:
    """Generators ``(a_n u^i_n)`` with ``u^i = J(gamma_i g_i + 1)``.

    ``gamma_i = 1/g_i(a)`` when ``g_i(a) != 0`` and 1 otherwise, so the shifted
    function takes the value ``delta_i`` in ``{1, 2}`` at the left endpoint.
    """
    a, Lam = spec.a, spec.partition
    if spec.mode != THM43:
        raise ParameterError(f"expected mode {THM43!r}, got {spec.mode!r}")
    if a is None or Lam is None:
        raise ParameterError("block-shift generators need a partition and a scalar sequence")
    lp = a.cert.in_union_lp
    if not (a.cert.in_c0.yes and lp.no):
        raise PreconditionError(f"{a.label} must be certified in c0 and outside every lp "
                                f"(c0: {a.cert.in_c0.status}, union lp: {lp.status})")
    gammas, deltas, shifted, gens = [], [], [], []
    for g in spec.gs:
        if g.domain != Lam.interval:
            raise ParameterError(f"{g.label} lives on {g.domain}, partition on {Lam.interval}")
        ga = exact(g.value_at_lo)
        gamma = 1 / ga if ga != 0 else Fraction(1)
        delta = gamma * ga + 1
        h = scaled_sum([(gamma, g), (1, constant(1, g.domain))], g.domain)
        gammas.append(gamma)
        deltas.append(delta)
        shifted.append(h)
        gens.append(scale_product(a, build_jlambda(Lam, h)))
    return AlgebraGenerators(spec, tuple(gens), tuple(gammas), tuple(deltas), tuple(shifted))


def _nonneg_witness(u: FnSeq, depth: int) -> Optional[tuple]:
    for n in range(1, depth + 1):
        region = u.support(n) or u.domain
        for x in region.grid(NONNEG_POINTS):
            v = u.term(n)._value_exact(x)
            if v < 0:
                return n, x, v
    return None


def build_thm45(scalar_basis: Sequence[ScalarSeq], u: FnSeq, depth: int = DEFAULT_DEPTH) -> AlgebraGenerators:
    """Generators ``(a^i_n u_n)`` for an eligible scalar basis and a nonnegative ``u`` in family F."""
    if u.f_cert is None:
        raise PreconditionError(f"{u.label} carries no family-F certificate")
    for a in scalar_basis:
        if not a.eligible:
            raise PreconditionError(f"{a.label} is not certified in c0 minus l1")
    bad = _nonneg_witness(u, depth)
    if bad is not None:
        n, x, v = bad
        raise PreconditionError(f"u_{n}({float(x)!r}) = {v!r} < 0")
    spec = AlgebraSpec(THM45, a=None, scalar_basis=tuple(scalar_basis), u=u)
    gens = tuple(scale_product(a, u) for a in scalar_basis)
    return AlgebraGenerators(spec, gens, L=u.f_cert.L)


def build_algebra(spec: AlgebraSpec) -> AlgebraGenerators:
    if spec.mode == THM43:
        return build_thm43(spec)
    if spec.mode == THM45:
        return build_thm45(spec.scalar_basis, spec.u)
    raise ParameterError(f"unknown algebra mode {spec.mode!r}")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """``F_n = P(gen^1_n, ..., gen^N_n)`` computed coordinatewise."""

    P: PolyNoConst
    indices: tuple
    realized: FnSeq
    eval_poly: Optional[PolyNoConst] = None
    gens: Optional[AlgebraGenerators] = None
    notes: tuple = field(default=())


def _diagonal_poly(P: PolyNoConst, deltas: Sequence[Fraction]) -> Optional[PolyNoConst]:
    """``Q(t) = sum_j lambda_j prod_k delta_k^j_k t^|j|``; ``None`` when it cancels to zero."""
    coeffs: dict[int, Fraction] = {}
    for j, lam in P.terms.items():
        c = lam
        for jk, d in zip(j, deltas):
            c *= Fraction(d) ** jk
        coeffs[sum(j)] = coeffs.get(sum(j), Fraction(0)) + c
    coeffs = {d: c for d, c in coeffs.items() if c != 0}
    return PolyNoConst.univariate(coeffs) if coeffs else None


def _realize_term(P: PolyNoConst, terms: Sequence[RealFn], domain) -> RealFn:
    parts = []
    for j, lam in P.terms.items():
        factors = [(f, jk) for f, jk in zip(terms, j) if jk]
        parts.append((lam, product(factors)))
    return scaled_sum(parts, domain)


def poly_combine(generators: Sequence[FnSeq], P: PolyNoConst) -> AlgebraElement:
    """The element ``P(gen^1, ..., gen^N)`` of the coordinatewise algebra."""
    gens = list(generators)
    if P.nvars != len(gens):
        raise ParameterError(f"P has {P.nvars} variables but {len(gens)} generators were given")
    dom = gens[0].domain
    if P.nvars == 1 and P.is_identity:
        realized = gens[0]
    else:
        g0 = gens[0]
        realized = FnSeq(
            dom,
            lambda n: _realize_term(P, [g.term(n) for g in gens], dom),
            f"P[{', '.join(g.label for g in gens)}]",
            supports=g0.support,
            disjoint_tag=g0.disjoint_tag if all(g.disjoint_tag == g0.disjoint_tag for g in gens) else None,
            disjoint_from=max(g.disjoint_from for g in gens),
            provenance={"origin": "algebra", "P": P},
        )
    Q = None
    ag = generators if isinstance(generators, AlgebraGenerators) else None
    if ag is not None and ag.mode == THM43:
        Q = _diagonal_poly(P, ag.deltas)
    return AlgebraElement(P, tuple(range(len(gens))), realized, Q, ag)


def _diagonal_sums(b: ScalarSeq) -> dict:
    return {str(N): math.fsum(abs(b.terms(N))) for N in DIAGONAL_SUM_NS}


def _certify_thm43(E: AlgebraElement, gens: AlgebraGenerators, depth: int) -> AMWCertificate:
    a, Lam = gens.spec.a, gens.spec.partition
    F = E.realized
    absolute = SubCert(DISJOINT, "products of block terms stay inside (alpha_{3n-2}, alpha_{3n+1})")
    C = sum(abs(float(lam)) * math.prod(sup_norm(h).upper ** jk for h, jk in zip(gens.shifted, j))
            for j, lam in E.P.terms.items())
    uniform = SubCert(C0_ON_F, f"a in c0 ({a.cert.in_c0.reason}) and ||F_n|| <= {C:.17g} max|a_n|^d over degrees d >= 1")
    Q = E.eval_poly
    sanity: dict = {}
    notes = []
    if Q is None:
        divergence = SubCert(UNKNOWN, "divergence unknown at alpha-points: Q vanishes identically "
                                      "(element is zero along the diagonal by freeness)")
        notes.append("flagged: degenerate diagonal polynomial")
        return AMWCertificate(absolute, uniform, divergence, sanity, depth, tuple(notes))
    b = apply_poly(a, Q)
    err = 0.0
    for n in range(1, depth + 1):
        an = a.term(n)
        if an == 0:
            continue
        x = Lam.alpha(3 * n - 1)
        err = max(err, abs(F.term(n)._value_exact(x) - float(Q(an))))
    sanity["identity_max_error"] = err
    sanity["diagonal_abs_sums"] = _diagonal_sums(b)
    l1 = b.cert.in_l1
    if err > IDENTITY_TOL:
        divergence = SubCert(UNKNOWN, f"evaluation identity at alpha_(3n-1) off by {err:.3g}")
    elif l1.no:
        divergence = SubCert(STRUCTURAL, f"|F_n(alpha_(3n-1))| = |Q(a_n)| with Q = {Q}; "
                                         f"Q(a) not in l1 ({l1.reason})")
    elif l1.yes:
        divergence = SubCert(UNKNOWN, f"Q(a) is summable, so the block values bound nothing ({l1.reason})")
    else:
        divergence = SubCert(UNKNOWN, f"l1 membership of Q(a) undecided for Q = {Q}")
    return AMWCertificate(absolute, uniform, divergence, sanity, depth, tuple(notes))


def witness_point(u: FnSeq, n: int, L: float):
    """A point ``x_n`` with ``u_n(x_n) = L``.

    For block transplants it is the image of the maximizer of ``f``; otherwise a
    1025-point grid search within ``1e-9``.
    """
    prov = u.provenance
    if prov.get("origin") == "jlambda":
        Lam, f = prov["partition"], prov["f"]
        xs = argmax_abs(f)
        p1, p2 = Lam.alpha(3 * n - 1), Lam.alpha(3 * n)
        x = p1 + (p2 - p1) * (xs - f.domain.lo) / f.domain.width
        if abs(u.term(n)._value_exact(x) - L) < 1e-9:
            return x
    region = u.support(n) or u.domain
    for x in region.grid(1025):
        if abs(u.term(n)._value_exact(x) - L) < 1e-9:
            return x
    return None


def _certify_thm45(E: AlgebraElement, gens: AlgebraGenerators, depth: int) -> AMWCertificate:
    u, basis, L = gens.spec.u, gens.spec.scalar_basis, gens.L
    F = E.realized
    absolute = SubCert(DISJOINT, f"every term is a multiple of a power of u_n ({u.f_cert.disjoint_supports})")
    if all(a.cert.in_c0.yes for a in basis):
        uniform = SubCert(C0_ON_F, f"every basis sequence in c0; ||F_n|| <= sum |lambda| M^d prod |a^k_n|^j_k with M = {u.f_cert.M:.17g}")
    else:
        uniform = SubCert(UNKNOWN, "some basis sequence is not certified in c0")
    parts = []
    for j, lam in E.P.terms.items():
        fac = [(a, jk) for a, jk in zip(basis, j) if jk]
        parts.append((lam * Fraction(L) ** sum(j), seq_product(fac)))
    c = combination(parts)
    err = 0.0
    missing = 0
    for n in range(1, depth + 1):
        x = witness_point(u, n, L)
        if x is None:
            missing += 1
            continue
        err = max(err, abs(F.term(n)._value_exact(x) - c.term(n)))
    sanity = {"witness_max_error": err, "witness_missing": missing, "diagonal_abs_sums": _diagonal_sums(c)}
    l1 = c.cert.in_l1
    if missing or err > WITNESS_TOL:
        divergence = SubCert(UNKNOWN, f"witness identity unverified (error {err:.3g}, missing {missing})")
    elif l1.no:
        divergence = SubCert(STRUCTURAL, f"|F_n(x_n)| = |c_n| with c = {c.label} not in l1 ({l1.reason})")
    elif l1.yes:
        # summable witness values give no lower bound on the norms; they do not refute divergence
        divergence = SubCert(UNKNOWN, f"witness values are summable, so they bound nothing ({l1.reason})")
    else:
        divergence = SubCert(UNKNOWN, f"l1 membership of {c.label} undecided")
    return AMWCertificate(absolute, uniform, divergence, sanity, depth)


def certify_algebra_element(E: AlgebraElement, gens: Optional[AlgebraGenerators] = None,
                            depth: int = DEFAULT_DEPTH) -> AMWCertificate:
    gens = gens or E.gens
    if gens is None:
        raise PreconditionError("the element was not built from an algebra generator system")
    if gens.mode == THM43:
        return _certify_thm43(E, gens, depth)
    return _certify_thm45(E, gens, depth)


@dataclass(frozen=True)
class FreenessEntry:
    poly: str
    witness: Optional[tuple]

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        w = None if self.witness is None else {"n": self.witness[0], "x": str(self.witness[1]),
                                               "value": self.witness[2]}
        return {"poly": self.poly, "witness": w}


@dataclass(frozen=True)
class FreenessReport:
    entries: tuple
    depth: int

    @property
    def all_found(self) -> bool:
        return all(e.found for e in self.entries)

    @property
    def violations(self) -> list:
        return [e.poly for e in self.entries if not e.found]

    def to_dict(self) -> dict:
        return {"depth": self.depth, "all_found": self.all_found,
                "entries": [e.to_dict() for e in self.entries]}


def freeness_check(generators: Sequence[FnSeq], polys: Sequence[PolyNoConst],
                   depth: int = DEFAULT_DEPTH) -> FreenessReport:
    """For each ``P`` look for ``(n, x)`` with ``|P(gens)_n(x)| > 1e-10``."""
    entries = []
    for P in polys:
        F = poly_combine(generators, P).realized
        witness = None
        for n in range(1, depth + 1):
            for x in _sample_points(generators[0], n, 3):
                v = F.term(n)._value_exact(x)
                if abs(v) > FREENESS_TOL:
                    witness = (n, x, v)
                    break
            if witness:
                break
        entries.append(FreenessEntry(str(P), witness))
    return FreenessReport(tuple(entries), depth)
