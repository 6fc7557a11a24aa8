import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amwkit.errors import DomainError
from amwkit.realfn import (UNIT, Interval, NormEnclosure, RealFn, line, affine, classic_bump, constant, evaluate,
                           exp_fn, fn_equal_sampled, power, product, scaled_sum, sup_norm, transplant,
                           zero_fn)
from amwkit.rng import Lcg64, random_realfn


def bump_closed_form(n, x):
    lo, hi = 2.0 ** -(n + 1), 2.0 ** -n
    return math.sin(2 ** (n + 1) * math.pi * x) ** 2 / n if lo < x < hi else 0.0


def dense_max(f, m=10_001):
    lo, hi = f.domain.as_floats()
    return max(abs(f(x)) for x in np.linspace(lo, hi, m))


def test_interval_rejects_degenerate():
    with pytest.raises(DomainError):
        Interval(1, 1)
    with pytest.raises(DomainError):
        Interval(2, 1)


@pytest.mark.parametrize("n,x,expected", [(1, Fraction(3, 8), 1.0), (2, Fraction(3, 16), 0.5), (3, 0.6, 0.0)])
def test_classic_bump_values(n, x, expected):
    assert classic_bump(n)(x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_classic_bump_matches_closed_form(n):
    f = classic_bump(n)
    for x in np.linspace(0, 1, 333):
        assert f(x) == pytest.approx(bump_closed_form(n, x), abs=1e-12)


def test_power_identity_value():
    assert evaluate(power(1), 0.25) == 0.25


def test_eval_outside_domain():
    with pytest.raises(DomainError):
        power(1)(1.5)


def test_breakpoint_takes_left_piece():
    f = classic_bump(1)
    assert f(Fraction(1, 4)) == 0.0


def test_sup_norm_exact_bump():
    e = sup_norm(classic_bump(7))
    assert e.exact and e.lower == e.upper == pytest.approx(1 / 7, abs=1e-15)


def test_sup_norm_bump_from_pieces_not_cache():
    e = sup_norm(classic_bump(7), use_known=False)
    assert e.exact
    assert abs(e.lower - 1 / 7) <= 1e-12


def test_sup_norm_zero():
    e = sup_norm(zero_fn())
    assert (e.lower, e.upper, e.exact) == (0.0, 0.0, True)


def test_sup_norm_x_one_minus_x():
    f = scaled_sum([(1, power(1)), (-1, power(2))])
    e = sup_norm(f)
    assert e.contains(0.25)
    assert e.width <= 1e-10
    assert not e.exact


def test_sup_norm_exp_shift_exact():
    f = exp_fn(1) + constant(1)
    e = sup_norm(f)
    assert e.exact
    assert e.lower == pytest.approx(math.e + 1, rel=1e-15)


@pytest.mark.parametrize("f", [
    power(0.5), power(3), exp_fn(-1), affine(-2, 1), classic_bump(3),
    scaled_sum([(1, power(1)), (-1, power(2))]),
    product([(power(1), 1), (exp_fn(-1), 1)]),
])
def test_sup_norm_brackets_dense_samples(f):
    e = sup_norm(f, use_known=False)
    assert e.lower <= e.upper
    assert dense_max(f) <= e.upper + 1e-12


def test_product_sup_matches_calculus():
    # x e^{-x} increases on [0, 1], so the max sits at x = 1
    f = product([(power(1), 1), (exp_fn(-1), 1)])
    assert sup_norm(f).contains(math.exp(-1), 1e-12)


def test_transplant_values():
    g = transplant(power(1), Interval(Fraction(1, 2), Fraction(3, 4)))
    assert g(Fraction(5, 8)) == 0.5
    h = transplant(exp_fn(1), Interval(0, Fraction(1, 2)))
    assert h(Fraction(1, 4)) == pytest.approx(math.exp(0.5), rel=1e-15)


def test_transplant_identity_target():
    f = exp_fn(1)
    assert fn_equal_sampled(f, transplant(f, UNIT), 1e-15)


def test_transplant_degenerate_target():
    with pytest.raises(DomainError):
        transplant(power(1), Interval(Fraction(1, 2), Fraction(1, 2)))


def test_fn_equal_sampled_examples():
    assert fn_equal_sampled(power(2), power(2), 0.0)
    assert not fn_equal_sampled(power(1), zero_fn(), 1e-9)
    assert fn_equal_sampled(scaled_sum([(2, power(1))]), transplant(power(1).scale(2), UNIT), 1e-15)


def test_fn_equal_sampled_domain_mismatch():
    with pytest.raises(DomainError):
        fn_equal_sampled(power(1), power(1, Interval(0, 2)), 1e-9)


def test_enclosure_invariants():
    with pytest.raises(ValueError):
        NormEnclosure(0.3, 0.2, False)
    with pytest.raises(ValueError):
        NormEnclosure(-0.1, 0.2, False)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_random_functions_enclosure_and_transplant(seed):
    f = random_realfn(Lcg64(seed))
    e = sup_norm(f, use_known=False)
    assert dense_max(f, 2001) <= e.upper + 1e-12
    g = transplant(f, Interval(Fraction(1, 3), Fraction(1, 2)))
    eg = sup_norm(g, use_known=False)
    assert eg.intersects(e, 1e-12)
    assert abs(g.value_at_lo - f.value_at_lo) <= 1e-14
    assert abs(g.value_at_hi - f.value_at_hi) <= 1e-14


def test_discontinuous_pieces_rejected():
    half = Fraction(1, 2)
    pieces = ((Interval(0, half), line(0, 0, half, 1)), (Interval(half, 1), line(half, 2, 1, 2)))
    with pytest.raises(DomainError, match="discontinuity"):
        RealFn(UNIT, pieces)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_transplanted_pieces_agree_at_breakpoints(seed):
    f = random_realfn(Lcg64(seed))
    g = transplant(f, Interval(Fraction(1, 4), Fraction(3, 4)))
    outer = RealFn(UNIT, (
        (Interval(0, Fraction(1, 4)), line(0, 0, Fraction(1, 4), g.value_at_lo)),
        (Interval(Fraction(1, 4), Fraction(3, 4)), g.pieces[0][1]),
        (Interval(Fraction(3, 4), 1), line(Fraction(3, 4), g.value_at_hi, 1, 0)),
    ))
    assert abs(outer(Fraction(1, 4)) - f.value_at_lo) <= 1e-14
    assert abs(outer(Fraction(3, 4)) - f.value_at_hi) <= 1e-14


def test_support_metadata_respected():
    f = classic_bump(4)
    s = f.support
    for x in np.linspace(0, 1, 501):
        if not (float(s.lo) < x < float(s.hi)):
            assert abs(f(x)) <= 1e-15
