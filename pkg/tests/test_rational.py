from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from tensorrho._rational import (
    as_fraction,
    ceil_sqrt_int,
    exp_bracket,
    fraction_to_decimal,
    lcm_all,
    log_bracket,
    mpf_to_fraction,
    parse_rational,
)
from tensorrho.errors import InputError


def _mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


def test_parse_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == -2
    assert parse_rational("0.125") == Fraction(1, 8)
    with pytest.raises(InputError):
        parse_rational("1/0")
    with pytest.raises(InputError):
        parse_rational("abc")
    with pytest.raises(InputError):
        parse_rational(0.1)


def test_as_fraction_float_is_exact():
    assert as_fraction(0.1) == Fraction(0.1)
    with pytest.raises(InputError):
        as_fraction(float("nan"))


def test_lcm():
    assert lcm_all([2, 3, 4]) == 12
    assert lcm_all([]) == 1


@given(st.integers(0, 10**12))
def test_ceil_sqrt(k):
    r = ceil_sqrt_int(k)
    assert r * r >= k and (r == 0 or (r - 1) ** 2 < k)


@given(st.fractions(min_value=Fraction(1, 10**6), max_value=10**6))
def test_log_bracket_contains(q):
    lo, hi = log_bracket(q, 64)
    with mpmath.workprec(256):
        v = mpmath.log(mpmath.mpf(q.numerator) / q.denominator)
        assert _mp(lo) <= v <= _mp(hi)
    assert hi - lo <= Fraction(1, 2**60)


@given(st.fractions(min_value=-50, max_value=50))
def test_exp_bracket_contains(q):
    lo, hi = exp_bracket(q, 64)
    with mpmath.workprec(256):
        v = mpmath.exp(_mp(q))
        assert _mp(lo) <= v <= _mp(hi)
        assert _mp(hi - lo) <= v * mpmath.ldexp(1, -56)


def test_log_bracket_exact_at_one():
    lo, hi = log_bracket(1, 64)
    assert lo <= 0 <= hi


def test_decimal_round_trip():
    q = Fraction(-7, 3)
    assert abs(Fraction(fraction_to_decimal(q, 40)) - q) < Fraction(1, 10**38)


def test_mpf_to_fraction_exact():
    with mpmath.workprec(113):
        x = mpmath.mpf(1) / 3
        assert _mp(mpf_to_fraction(x)) == x
    with pytest.raises(ValueError):
        mpf_to_fraction(mpmath.inf)
