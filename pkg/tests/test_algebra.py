import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from amwkit.algebra import (THM43, AlgebraSpec, build_thm43, build_thm45, certify_algebra_element,
                            expand_affine, freeness_check, poly_combine, witness_point)
from amwkit.construct import build_jlambda, default_partition
from amwkit.errors import ParameterError, PreconditionError
from amwkit.poly import Polynomial, PolyNoConst
from amwkit.realfn import Interval, affine, constant, exp_fn, power, scaled_sum, sup_norm
from amwkit.rng import Lcg64, random_poly
from amwkit.scalarseq import make_logpower, make_power
from amwkit.series import certify_amw

LAM = default_partition()
A = make_logpower(1)


def sympy_expand(P, alphas, betas):
    xs = sp.symbols(f"x1:{P.nvars + 1}")
    subs = [sp.Rational(a.numerator, a.denominator) * x + sp.Rational(b.numerator, b.denominator)
            for x, a, b in zip(xs, map(Fraction, alphas), map(Fraction, betas))]
    expr = sp.expand(sum(sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s ** e for s, e in zip(subs, j)])
                         for j, c in P.terms.items()))
    poly = sp.Poly(expr, *xs)
    return {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms() if c != 0}


def test_expand_affine_examples():
    assert expand_affine(PolyNoConst(1, {(2,): 1}), [2], [1]) == Polynomial(1, {(2,): 4, (1,): 4, (0,): 1})
    assert expand_affine(PolyNoConst(1, {(1,): 1}), [1], [0]) == Polynomial(1, {(1,): 1})
    assert expand_affine(PolyNoConst(2, {(1, 1): 1}), [1, 1], [1, 1]) == \
        Polynomial(2, {(1, 1): 1, (1, 0): 1, (0, 1): 1, (0, 0): 1})


def test_expand_affine_rejects_zero_alpha():
    with pytest.raises(ParameterError):
        expand_affine(PolyNoConst(1, {(1,): 1}), [0], [1])


def test_expand_affine_matches_sympy_seeded():
    rng = Lcg64(7)
    for _ in range(40):
        k = rng.randint(1, 3)
        P = random_poly(rng, k, 4)
        al = [rng.rational(nonzero=True) for _ in range(k)]
        be = [rng.rational() for _ in range(k)]
        assert expand_affine(P, al, be).terms == sympy_expand(P, al, be)


def thm43(gs, a=A):
    return build_thm43(AlgebraSpec(THM43, LAM, a, tuple(gs)))


def test_gamma_delta_rule():
    G = thm43([power(1), exp_fn(1), scaled_sum([(1, exp_fn(1)), (3, constant(1))])])
    assert G.gammas == (1, 1, Fraction(1, 4))
    assert G.deltas == (1, 2, 2)


def test_thm43_rejects_lp_scalars():
    with pytest.raises(PreconditionError):
        thm43([power(1)], make_power(0.5))


def test_identity_polynomial_returns_generator():
    G = thm43([power(1)])
    E = poly_combine(G, PolyNoConst(1, {(1,): 1}))
    assert E.realized is G[0]


def test_square_identity_at_block_points():
    G = thm43([power(1)])
    E = poly_combine(G, PolyNoConst(1, {(2,): 1}))
    for n in range(1, 21):
        x = LAM.alpha(3 * n - 1)
        assert abs(E.realized.term(n)(x) - A.term(n) ** 2) <= 1e-12


def test_two_generator_arithmetic():
    G = thm43([power(1), power(2)])
    P = PolyNoConst(2, {(1, 1): 1, (0, 1): -1})
    E = poly_combine(G, P)
    for n in (1, 4, 11):
        x = (LAM.alpha(3 * n - 1) + LAM.alpha(3 * n)) / 2
        g1, g2 = G[0].term(n)(x), G[1].term(n)(x)
        assert abs(E.realized.term(n)(x) - (g1 * g2 - g2)) <= 1e-12


def test_arity_mismatch():
    with pytest.raises(ParameterError):
        poly_combine(thm43([power(1)]), PolyNoConst(2, {(1, 1): 1}))


def test_certify_thm43_examples():
    G = thm43([power(1)])
    for P in (PolyNoConst(1, {(1,): 1}), PolyNoConst(1, {(2,): 1})):
        c = certify_algebra_element(poly_combine(G, P))
        assert c.affirmed
        assert c.sanity["identity_max_error"] <= 1e-12


def test_zero_diagonal_polynomial_flagged():
    # deltas are 1 and 2, so x1^2 - (1/2) x1 x2 cancels along the diagonal
    G = thm43([power(1), exp_fn(1)])
    P = PolyNoConst(2, {(2, 0): 1, (1, 1): Fraction(-1, 2)})
    E = poly_combine(G, P)
    assert E.eval_poly is None
    c = certify_algebra_element(E)
    assert c.divergence.kind == "unknown"
    assert "zero" in c.divergence.reason
    assert c.notes


def test_product_support_inside_block():
    G = thm43([power(1), power(2)])
    E = poly_combine(G, PolyNoConst(2, {(1, 1): 1, (2, 0): 2}))
    for n in (1, 3, 8):
        p0, _, _, p3 = LAM.block(n)
        outside = [x for x in Interval(0, 1).grid(101) if not (p0 < x < p3)]
        assert all(E.realized.term(n)(x) == 0.0 for x in outside)


def test_uniform_bound_on_products():
    G = thm43([power(1), power(2)])
    bound = sup_norm(G.shifted[0]).upper * sup_norm(G.shifted[1]).upper
    for n in range(1, 21):
        u1 = G[0].term(n).scale(1 / A.term(n))
        u2 = G[1].term(n).scale(1 / A.term(n))
        assert sup_norm(u1 * u2, use_known=False).lower <= bound * (1 + 1e-12)


def test_freeness_examples():
    G = thm43([power(1), power(2)])
    with pytest.raises(ParameterError):
        PolyNoConst(2, [((1, 1), 1), ((1, 1), -1)])
    rep = freeness_check(G, [PolyNoConst(2, {(2, 0): 1, (0, 1): -1})])
    assert rep.all_found
    rng = Lcg64()
    assert freeness_check(G, [random_poly(rng, 2, 3) for _ in range(25)]).all_found


def test_thm45_pipeline():
    u = build_jlambda(LAM, power(2))
    basis = [make_logpower(1), make_logpower(2)]
    H = build_thm45(basis, u)
    assert len(H) == 2
    E = poly_combine(H, PolyNoConst(2, {(1, 1): 1}))
    c = certify_algebra_element(E)
    assert c.affirmed
    assert "ln^-3" in c.divergence.reason
    for n in range(1, 21):
        x = witness_point(u, n, 1.0)
        expected = basis[0].term(n) * basis[1].term(n)
        assert abs(E.realized.term(n)(x) - expected) <= 1e-10


def test_thm45_single_generator_matches_scale_product():
    u = build_jlambda(LAM, power(2))
    H = build_thm45([make_logpower(1)], u)
    E = poly_combine(H, PolyNoConst(1, {(1,): 1}))
    assert E.realized is H[0]
    assert certify_amw(E.realized).affirmed


def test_thm45_rejects_negative_u():
    u = build_jlambda(LAM, affine(2, -1))
    with pytest.raises(PreconditionError, match="< 0"):
        build_thm45([make_logpower(1)], u)


def test_expand_affine_preserves_value():
    P = PolyNoConst(2, {(2, 1): Fraction(3, 2), (0, 3): -1})
    Q = expand_affine(P, [Fraction(1, 3), 2], [Fraction(-1, 2), 5])
    for x, y in [(Fraction(1, 7), Fraction(2)), (Fraction(-3), Fraction(1, 5))]:
        assert Q(x, y) == P(Fraction(1, 3) * x - Fraction(1, 2), 2 * y + 5)


def test_q_matches_direct_sum():
    G = thm43([power(1), exp_fn(1)])
    P = PolyNoConst(2, {(1, 1): 2, (0, 2): -1, (1, 0): 1})
    E = poly_combine(G, P)
    for n in (1, 5, 50):
        an = A.term(n)
        direct = 2 * (1 * an) * (2 * an) - (2 * an) ** 2 + an
        assert math.isclose(float(E.eval_poly(an)), direct, rel_tol=1e-14)
    assert np.isfinite(float(E.eval_poly(0.5)))


def test_thm45_cancelling_witness_is_unknown_not_failed():
    # a1^2 = a2 for this basis, so the witness values cancel while the element stays nonzero
    u = build_jlambda(LAM, power(2))
    H = build_thm45([make_logpower(1), make_logpower(2)], u)
    E = poly_combine(H, PolyNoConst(2, {(2, 0): 1, (0, 1): -1}))
    c = certify_algebra_element(E)
    assert c.divergence.kind == "unknown" and c.status == "unknown"
    n = 3
    expected = 0.25 * make_logpower(2).term(n)
    assert abs(sup_norm(E.realized.term(n), use_known=False).lower - expected) <= 1e-9
