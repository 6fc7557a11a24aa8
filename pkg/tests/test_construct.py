import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amwkit.construct import (build_jlambda, check_family_f, classic_example, default_partition,
                              from_terms)
from amwkit.errors import DomainError
from amwkit.realfn import (UNIT, Interval, affine, exp_fn, fn_equal_sampled, power, scaled_sum,
                           sup_norm, zero_fn)

LAM = default_partition()


def test_default_partition_values():
    assert [LAM.alpha(k) for k in (1, 2, 3, 4)] == [0, Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)]
    assert LAM.alpha(7) == Fraction(63, 64)
    assert default_partition(Interval(-1, 1)).alpha(3) == Fraction(1, 2)


def test_partition_is_exact_at_depth():
    # float arithmetic would collapse these points onto 1.0
    a = [LAM.alpha(k) for k in range(1, 62)]
    assert all(x < y for x, y in zip(a, a[1:]))
    assert a[-1] < 1


def test_jlambda_first_term():
    u1 = build_jlambda(LAM, power(1)).term(1)
    assert u1(Fraction(1, 2)) == 0.0
    assert u1(Fraction(3, 4)) == 1.0
    assert u1(Fraction(5, 8)) == 0.5


@pytest.mark.parametrize("f", [power(1), power(2), power(3), exp_fn(1), exp_fn(-2), affine(-1, 2)])
def test_example_properties(f):
    u = build_jlambda(LAM, f)
    norm_f = sup_norm(f, use_known=False)
    for n in range(1, 21):
        p0, p1, p2, p3 = LAM.block(n)
        un = u.term(n)
        assert abs(un(p1) - f.value_at_lo) <= 1e-12
        assert abs(un(p2) - f.value_at_hi) <= 1e-12
        for x in np.linspace(0, float(p0), 51):
            assert un(x) == 0.0
        for x in Interval(p3, 1).grid(50) if p3 < 1 else []:
            assert un(x) == 0.0
        assert sup_norm(un, use_known=False).intersects(norm_f)


def test_jlambda_zero_function():
    u = build_jlambda(LAM, zero_fn())
    assert u.vanishes_from == 1
    assert sup_norm(u.term(3)).upper == 0.0


def test_jlambda_domain_mismatch():
    with pytest.raises(DomainError):
        build_jlambda(LAM, power(1, Interval(0, 2)))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([-2, -1, Fraction(1, 2), 3]), st.sampled_from([-1, Fraction(1, 2), 2]),
       st.sampled_from([1.0, 2.0, 0.5]), st.sampled_from([1.0, -1.0]))
def test_jlambda_linearity(lam, mu, c, d):
    f, g = power(c), exp_fn(d)
    left = build_jlambda(LAM, scaled_sum([(lam, f), (mu, g)]))
    uf, ug = build_jlambda(LAM, f), build_jlambda(LAM, g)
    for n in range(1, 11):
        right = scaled_sum([(lam, uf.term(n)), (mu, ug.term(n))])
        assert fn_equal_sampled(left.term(n), right, 1e-10)


def test_injectivity_witness():
    uf, ug = build_jlambda(LAM, power(1)), build_jlambda(LAM, power(2))
    region = Interval(LAM.alpha(2), LAM.alpha(3))
    assert any(abs(uf.term(1)(x) - ug.term(1)(x)) > 1e-3 for x in region.grid(33))


def test_classic_example_norms_and_values():
    F = classic_example()
    for n in range(1, 11):
        assert F.norm(n).lower == pytest.approx(1 / n, abs=1e-15)
        assert sup_norm(F.term(n), use_known=False).contains(1 / n, 1e-12)
    assert F.term(3)(0.6) == 0.0
    assert F.partial_norm_sum(10 ** 4) == pytest.approx(math.fsum(1 / k for k in range(1, 10 ** 4 + 1)), abs=1e-9)
    assert F.f_cert is None


def test_check_family_f_jlambda():
    r = check_family_f(build_jlambda(LAM, power(1)), depth=20)
    assert r.ok
    assert r.L == r.M == 1.0


def test_check_family_f_classic_fails():
    r = check_family_f(classic_example(), depth=20)
    assert not r.ok
    assert "uniformly far from zero" in r.failure
    assert r.L <= 1 / 20 + 1e-15


def test_check_family_f_overlap_witness():
    r = check_family_f(from_terms([power(1), power(2)]), depth=20)
    assert not r.ok
    assert r.witness == (1, 2, Fraction(1, 2))


def test_from_terms_vanishes():
    G = from_terms([power(1), zero_fn()])
    assert G.vanishes_from == 2
    assert G.norm(5).upper == 0.0
    assert G.term(1).domain == UNIT
