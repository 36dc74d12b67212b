"""Beatty membership: exact surds, torus windows, enumeration."""
import math
import random
from fractions import Fraction

import pytest

from beattysieve.beatty import (BeattyParams, TorusInterval, beatty_enumerate,
                                membership_interval, pigeonhole_shift,
                                recovered_index, shift_intersection,
                                sqrt_fraction, torus_member)
from beattysieve.errors import PreconditionError


def test_sqrt_fraction_is_tight():
    s = sqrt_fraction(2)
    # default surd precision is 40 digits, so the square misses by < 10^-39
    assert abs(s * s - 2) < Fraction(1, 10**39)
    wide = sqrt_fraction(2, digits=80)
    assert abs(wide * wide - 2) < Fraction(1, 10**79)
    with pytest.raises(ValueError):
        sqrt_fraction(-1)


def test_params_validation():
    with pytest.raises(PreconditionError):
        BeattyParams.make(Fraction(1, 2))
    with pytest.raises(PreconditionError):
        BeattyParams.make(Fraction(3, 2), Fraction(7, 4))


def test_quadratic_params_expose_both_views(sqrt2, golden):
    assert sqrt2.alpha == pytest.approx(math.sqrt(2))
    assert sqrt2.gamma == pytest.approx(1 / math.sqrt(2))
    assert abs(sqrt2.alpha_exact**2 - 2) < Fraction(1, 10**39)
    assert golden.alpha == pytest.approx((1 + math.sqrt(5)) / 2)
    assert golden.gamma == pytest.approx(2 / (1 + math.sqrt(5)))
    assert sqrt2.beta == 0 and sqrt2.beta_exact == 0


def test_enumerate_small_windows(sqrt2):
    assert beatty_enumerate(sqrt2, 1, 8) == [1, 2, 4, 5, 7]
    assert beatty_enumerate(sqrt2, 100, 101) == [100]
    assert beatty_enumerate(sqrt2, 100, 100) == []
    near_two = BeattyParams.make(Fraction(2) + Fraction(1, 10**12))
    assert beatty_enumerate(near_two, 1, 10) == [2, 4, 6, 8]


def test_member_and_recovered_index(sqrt2):
    assert torus_member(sqrt2, 2)
    assert not torus_member(sqrt2, 3)
    assert torus_member(sqrt2, 4)
    assert recovered_index(sqrt2, 1) == 1
    assert recovered_index(sqrt2, 4) == 3
    with pytest.raises(PreconditionError):
        torus_member(sqrt2, 0)


def test_recovered_index_inverts_the_floor(sqrt2, golden):
    for params in (sqrt2, golden):
        for n in beatty_enumerate(params, 1, 200):
            k = recovered_index(params, n)
            assert math.floor(params.alpha_exact * k + params.beta_exact) == n


def test_torus_interval_boundary_conventions():
    ival = TorusInterval(Fraction(1, 4), Fraction(1, 2))
    assert not ival.contains(Fraction(1, 4))      # left end excluded
    assert ival.contains(Fraction(3, 4))          # right end included
    assert not ival.contains_open(Fraction(3, 4))
    assert ival.contains(Fraction(1, 2))
    assert ival.right == Fraction(3, 4)
    wrap = TorusInterval(Fraction(9, 10), Fraction(1, 5))
    assert wrap.contains(Fraction(1, 20))
    assert wrap.right == Fraction(1, 10)
    with pytest.raises(PreconditionError):
        TorusInterval(Fraction(0), Fraction(0))
    with pytest.raises(PreconditionError):
        TorusInterval(Fraction(0), Fraction(3, 2))


def test_membership_interval_characterizes_members(sqrt2):
    ival = membership_interval(sqrt2)
    assert float(ival.length) == pytest.approx(sqrt2.gamma)
    assert float(ival.left) == pytest.approx(0.2928932188134525)
    assert ival.right == 0
    for n in range(1, 500):
        assert torus_member(sqrt2, n) == ival.contains(sqrt2.gamma_exact * n)


def test_shift_intersection_shrinks_the_window():
    base = TorusInterval(Fraction(1, 5), Fraction(3, 10))
    narrow = BeattyParams.make(Fraction(20, 19))
    out = shift_intersection(base, narrow, 1, Fraction(1, 10))
    assert out.left == Fraction(1, 5)
    assert out.length == Fraction(1, 4)
    assert float(out.right) == pytest.approx(0.45)
    with pytest.raises(PreconditionError):
        shift_intersection(base, narrow, 0, Fraction(1, 10))
    with pytest.raises(PreconditionError):
        shift_intersection(base, narrow, 1, Fraction(1, 5))


def test_pigeonhole_shift_pinned_cases(sqrt2, table):
    z, hits = pigeonhole_shift([0.1, 0.2, 0.9], 0.5)
    assert z == pytest.approx(0.7)
    assert len(hits) == 3
    grid = [Fraction(j, 100) for j in range(100)]
    _, grid_hits = pigeonhole_shift(grid, Fraction(37, 100))
    assert len(grid_hits) == 37
    primes = [int(p) for p in table.primes() if p > 20][:20]
    gamma = Fraction(1 / math.sqrt(2))
    _, prime_hits = pigeonhole_shift([(gamma * p) % 1 for p in primes],
                                     Fraction(1, 10))
    assert len(prime_hits) == 3
    with pytest.raises(PreconditionError):
        pigeonhole_shift([0.5], 0.0)


def test_pigeonhole_never_below_the_proportional_floor():
    rng = random.Random(17)
    for _ in range(100):
        count = rng.randrange(1, 40)
        pts = [Fraction(rng.randrange(0, 997), 997) for _ in range(count)]
        length = Fraction(rng.randrange(1, 96), 100)
        _, hits = pigeonhole_shift(pts, length)
        assert len(hits) >= math.ceil(count * length)
