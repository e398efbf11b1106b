import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from auxfield.exact import (
    double_factorial,
    format_rational,
    multinomial,
    parse_rational,
    rational,
)

rationals = st.fractions(max_denominator=10**6)


@pytest.mark.parametrize("n, expected", [(-1, 1), (0, 1), (1, 1), (3, 3), (7, 105), (8, 384)])
def test_double_factorial_small(n, expected):
    assert double_factorial(n) == expected


def test_double_factorial_83_matches_direct_product():
    direct = math.prod(range(83, 0, -2))
    assert double_factorial(83) == direct
    assert len(str(direct)) > 60


def test_double_factorial_rejects_below_minus_one():
    with pytest.raises(ValueError):
        double_factorial(-2)


@pytest.mark.parametrize("m", range(31))
def test_double_factorial_against_factorial(m):
    assert double_factorial(2 * m - 1) * 2**m * math.factorial(m) == math.factorial(2 * m)


def test_rational_sign_normalization():
    assert rational(47, 480) == rational(-47, -480)
    assert rational(3, -6).denominator == 2
    assert rational(3, -6).numerator == -1


def test_rational_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rational(1, 0)


def test_cross_footing_of_second_order_column():
    # T(2,k|4-k) for k = 1..4 summed give the 1/N^2 Stirling coefficient
    total = rational(-5, 2) + rational(329, 32) + rational(-105, 8) + rational(385, 72)
    assert total == rational(1, 288)
    assert rational(1, 12) + rational(1, 288) * 0 == rational(1, 12)


def test_multinomial():
    assert multinomial([2, 1]) == 3
    assert multinomial([1, 1, 1]) == 6
    assert multinomial([]) == 1


@pytest.mark.parametrize("value, text", [(Fraction(-3, 4), "-3/4"), (Fraction(5), "5"), (Fraction(0), "0")])
def test_format_rational(value, text):
    assert format_rational(value) == text


@pytest.mark.parametrize("bad", ["", "1/", "1 /2", "a/b"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(rationals)
def test_format_parse_roundtrip(r):
    assert parse_rational(format_rational(r)) == r


@given(rationals, rationals)
def test_add_then_subtract(r, s):
    assert (r + s) - s == r


@given(rationals.filter(lambda r: r != 0))
def test_reciprocal(r):
    assert r * (1 / r) == 1


@given(st.integers(-10**9, 10**9), st.integers(1, 10**9))
def test_reduction_idempotent(num, den):
    once = rational(num, den)
    assert rational(once.numerator, once.denominator) == once
    assert math.gcd(once.numerator, once.denominator) == 1
