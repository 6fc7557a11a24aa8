from amwkit.rng import COEFFS, Lcg64, random_poly

MASK = (1 << 64) - 1


def test_lcg_recurrence():
    r = Lcg64(0x5EED)
    s = 0x5EED
    for _ in range(5):
        s = (s * 6364136223846793005 + 1442695040888963407) & MASK
        assert r.next_u64() == s


def test_uniform_range_and_reproducibility():
    a, b = Lcg64(), Lcg64()
    xs = [a.random() for _ in range(1000)]
    assert xs == [b.random() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert 0.4 < sum(xs) / len(xs) < 0.6


def test_coefficients_from_fixed_set():
    r = Lcg64(3)
    assert {r.coeff() for _ in range(200)} == set(COEFFS)


def test_random_poly_has_no_constant():
    r = Lcg64()
    for _ in range(50):
        P = random_poly(r, 3, 4)
        assert P.degree <= 4
        assert all(sum(e) >= 1 for e in P.terms)
