"""Continued fractions, modulus selection, spacing sums."""
import math
import random
from fractions import Fraction

import pytest

from beattysieve.dioph import (approx_for_modulus, convergents,
                               distance_to_integer, reciprocal_sum_report,
                               spacing_bound_report, spacing_sum, type_margin)
from beattysieve.errors import PreconditionError

GAMMA = 1 / math.sqrt(2)


def test_convergents_of_one_over_sqrt2():
    rows = [(c.numerator, c.denominator, c.flag) for c in convergents(GAMMA, 6)]
    assert rows == [(0, 1, None), (1, 1, None), (2, 3, None), (5, 7, None),
                    (12, 17, None), (29, 41, None)]


def test_convergents_flag_exact_and_near_rational_stops():
    exact = convergents(Fraction(1, 3), 6)
    assert [(c.numerator, c.denominator, c.flag) for c in exact] == [
        (0, 1, None), (1, 3, "exact")]
    near = convergents(Fraction(1, 2) + Fraction(1, 10**15), 6)
    assert len(near) == 3
    assert (near[-1].numerator, near[-1].denominator) == (1, 2)
    assert near[-1].flag == "near-rational"


def test_golden_ratio_denominators_are_fibonacci():
    g = (math.sqrt(5) - 1) / 2
    assert [c.denominator for c in convergents(g, 10)] == [
        1, 1, 2, 3, 5, 8, 13, 21, 34, 55]


def test_convergents_straddle_the_target():
    rng = random.Random(5)
    for _ in range(25):
        g = Fraction(rng.randrange(1, 997), 997)
        rows = convergents(g, 12)
        denoms = [c.denominator for c in rows]
        assert denoms == sorted(denoms)
        for prev, cur in zip(rows, rows[1:]):
            a = Fraction(prev.numerator, prev.denominator) - g
            b = Fraction(cur.numerator, cur.denominator) - g
            assert a * b <= 0
        assert all(c.quality >= 0 for c in rows)


def test_approx_for_modulus_denominator_policy():
    a16 = approx_for_modulus(GAMMA, 16)
    assert (a16.numerator, a16.denominator) == (5, 7)
    assert float(a16.quality) == pytest.approx(0.007178933099166824)
    assert approx_for_modulus(GAMMA, 200).denominator == 41
    assert approx_for_modulus(GAMMA, 450).denominator == 41
    # n = 2 allows only denominator 1, so the numerator rounds gamma
    assert (approx_for_modulus(GAMMA, 2).numerator,
            approx_for_modulus(GAMMA, 2).denominator) == (1, 1)
    tiny = approx_for_modulus(Fraction(1, 1000), 16)
    assert (tiny.numerator, tiny.denominator, tiny.flag) == (0, 1, None)
    with pytest.raises(PreconditionError):
        approx_for_modulus(GAMMA, 1)


def test_distance_to_integer_exact():
    assert distance_to_integer(Fraction(7, 3)) == Fraction(1, 3)
    assert distance_to_integer(Fraction(-1, 4)) == Fraction(1, 4)
    assert distance_to_integer(Fraction(5)) == 0


def test_type_margin_pinned_and_brute_forced():
    margin, arg = type_margin(GAMMA, 100, 1)
    assert margin == pytest.approx(0.29289321881345254)
    assert arg == 1
    margin3, arg3 = type_margin(GAMMA, 100, 3)
    assert margin3 == pytest.approx(0.29289321881345254)
    assert arg3 == 1
    assert type_margin(0.5, 2, 3) == (0.0, 2)
    with pytest.raises(PreconditionError):
        type_margin(GAMMA, 0, 1)

    rng = random.Random(23)
    for _ in range(20):
        g = Fraction(rng.randrange(1, 499), 499)
        e = rng.randrange(1, 4)
        margin, arg = type_margin(g, 30, e)
        best = min((r**e * distance_to_integer(g * r), r) for r in range(1, 31))
        assert margin == pytest.approx(float(best[0]))
        assert arg == best[1]


def test_spacing_sum_values_and_clamping():
    res = spacing_sum(GAMMA, 0, 10, 100)
    assert res.value == pytest.approx(65.80614817413729)
    assert res.clamped == 0 and res.zero_spacings == 0
    half = spacing_sum(Fraction(1, 2), 0, 2, 7)
    assert half.value == 9.0
    assert half.clamped == 1 and half.zero_spacings == 1


def test_spacing_sum_monotone_in_terms_and_cap():
    base = spacing_sum(GAMMA, 0, 10, 100).value
    more_terms = spacing_sum(GAMMA, 0, 20, 100).value
    assert more_terms == pytest.approx(154.30333673503478)
    assert more_terms > base
    assert spacing_sum(GAMMA, 0, 10, 1000).value >= base


def test_spacing_bound_report_rows():
    rows = spacing_bound_report(GAMMA, [100, 400, 1000], [100, 1000])
    assert len(rows) == 6
    assert set(rows[0]) == {"H", "M", "cap", "lhs", "r", "rhs", "ratio"}
    for row in rows:
        assert row["ratio"] == pytest.approx(row["lhs"] / row["rhs"])
        assert row["lhs"] <= row["rhs"] * 1.01


def test_reciprocal_sum_report():
    rep = reciprocal_sum_report(GAMMA, r=99)
    assert rep["M"] == 49 and rep["r"] == 99
    assert rep["lhs"] == pytest.approx(459.76577469802413)
    assert rep["rhs"] == pytest.approx(523.538436038759)
    assert rep["lhs"] <= rep["rhs"]
    with pytest.raises(PreconditionError):
        reciprocal_sum_report(Fraction(11, 20), r=2, m_count=10)
