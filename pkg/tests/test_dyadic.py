from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from deltasr.dyadic import Dyadic, HALF, ONE, ZERO


def test_canonical_form():
    assert (Dyadic(4, 3).numerator, Dyadic(4, 3).exponent) == (1, 1)
    assert (Dyadic(0, 7).numerator, Dyadic(0, 7).exponent) == (0, 0)
    assert Dyadic(6, 0).exponent == 0


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        Dyadic(1, -1)


def test_from_fraction_rejects_non_dyadic():
    assert Dyadic.from_fraction(Fraction(3, 8)) == Dyadic(3, 3)
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 3))


def test_formatting():
    assert str(Dyadic(1, 2)) == "1/4"
    assert Dyadic(3, 2).pow2_form() == "3/2^2"
    assert str(ONE) == "1" and str(ZERO) == "0"


dyadics = st.builds(Dyadic, st.integers(0, 1 << 40), st.integers(0, 60))


@given(dyadics, dyadics)
def test_arithmetic_matches_fractions(a, b):
    fa, fb = a.to_fraction(), b.to_fraction()
    assert (a + b).to_fraction() == fa + fb
    assert (a * b).to_fraction() == fa * fb
    assert a.average(b).to_fraction() == (fa + fb) / 2
    if fa >= fb:
        assert (a - b).to_fraction() == fa - fb
    assert (a < b) == (fa < fb) and (a == b) == (fa == fb)


@given(st.integers(0, 1 << 20), st.integers(20, 40))
def test_complement_of_probability(num, exp):
    p = Dyadic(num, exp)
    assert p.complement().to_fraction() == 1 - p.to_fraction()


def test_half_and_comparison_with_fraction():
    assert HALF == Fraction(1, 2)
    assert HALF.half() == Fraction(1, 4)
    assert Dyadic(7, 3) >= Fraction(7, 8)
    assert hash(Dyadic(1, 1)) == hash(Fraction(1, 2))
