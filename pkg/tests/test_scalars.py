from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kappastar.scalars import IMAG, ONE, ZERO, GaussianRational, format_scalar

rationals = st.fractions(max_numerator=50, max_denominator=12)
scalars = st.builds(GaussianRational, rationals, rationals)


@given(scalars, scalars, scalars)
def test_field_addition_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + ZERO == a
    assert (a - a).is_zero()


@given(scalars, scalars, scalars)
def test_field_multiplication_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * ONE == a
    assert a * (b + c) == a * b + a * c


@given(scalars)
def test_multiplicative_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == ONE


def test_imaginary_unit_squares_to_minus_one():
    assert IMAG * IMAG == GaussianRational(-1)


def test_exact_no_rounding():
    third = GaussianRational(Fraction(1, 3))
    assert third + third + third == ONE


@given(scalars, st.integers(min_value=0, max_value=8))
def test_power_matches_repeated_multiplication(a, n):
    expected = ONE
    for _ in range(n):
        expected = expected * a
    assert a ** n == expected


def test_printing_forms():
    assert format_scalar(GaussianRational(Fraction(3, 2))) == "3/2"
    assert format_scalar(GaussianRational(0, 1)) == "i"
    assert format_scalar(GaussianRational(0, -1)) == "-i"
    assert format_scalar(GaussianRational(0, Fraction(3, 2))) == "3/2*i"
    assert format_scalar(GaussianRational(Fraction(1, 2), 3)) == "(1/2+3*i)"
    assert format_scalar(GaussianRational(1, -1)) == "(1-i)"
