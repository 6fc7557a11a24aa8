"""Seeded 64-bit LCG and the random draws used by the property checks.

The generator is Knuth's MMIX LCG, so reports are bit-reproducible across
platforms and Python versions.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ParameterError
from .poly import PolyNoConst
from .realfn import UNIT, Interval, RealFn, affine, exp_fn, power, product, scaled_sum

DEFAULT_SEED = 0x5EED
_MULT = 6364136223846793005
_INC = 1442695040888963407
_MASK = (1 << 64) - 1

COEFFS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2))


class Lcg64:
    def __init__(self, seed: int = DEFAULT_SEED):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state * _MULT + _INC) & _MASK
        return self.state

    def random(self) -> float:
        """Uniform in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) / float(1 << 53)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        if hi < lo:
            raise ParameterError(f"empty range [{lo}, {hi}]")
        return lo + (self.next_u64() >> 11) % (hi - lo + 1)

    def choice(self, items: Sequence):
        return items[self.randint(0, len(items) - 1)]

    def coeff(self) -> Fraction:
        return self.choice(COEFFS)

    def rational(self, max_num: int = 5, max_den: int = 4, nonzero: bool = False) -> Fraction:
        while True:
            q = Fraction(self.randint(-max_num, max_num), self.randint(1, max_den))
            if q or not nonzero:
                return q


def random_realfn(rng: Lcg64, domain: Interval = UNIT) -> RealFn:
    """A nonzero continuous function built from the basic forms."""
    kind = rng.randint(0, 4)
    if kind == 0:
        return power(rng.choice((0.5, 1.0, 2.0, 3.0)), domain)
    if kind == 1:
        return exp_fn(rng.choice((-1.0, 0.5, 1.0)), domain)
    if kind == 2:
        slope = rng.rational(nonzero=True)
        return affine(slope, rng.rational(), domain)
    if kind == 3:
        f = power(rng.choice((1.0, 2.0)), domain)
        g = power(rng.choice((0.5, 3.0)), domain)
        return scaled_sum([(rng.coeff(), f), (rng.coeff(), g)], domain)
    return product([(power(1.0, domain), 1), (exp_fn(rng.choice((-1.0, 1.0)), domain), 1)])


def random_poly(rng: Lcg64, nvars: int, max_degree: int, max_terms: int = 3) -> PolyNoConst:
    """Random nonzero polynomial without constant term, coefficients in ``COEFFS``."""
    while True:
        terms = []
        for _ in range(rng.randint(1, max_terms)):
            deg = rng.randint(1, max_degree)
            exps = [0] * nvars
            for _ in range(deg):
                exps[rng.randint(0, nvars - 1)] += 1
            terms.append((tuple(exps), rng.coeff()))
        try:
            return PolyNoConst(nvars, terms)
        except ParameterError:
            continue
