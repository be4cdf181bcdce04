import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from optima.scalars import cosine_angle, exact_fraction, quadratic, rational, to_float


def test_rational_round_trip():
    x = rational(Fraction(3, 7))
    assert exact_fraction(x) == Fraction(3, 7)
    assert to_float(x) == pytest.approx(3 / 7, abs=0, rel=1e-16)


def test_quadratic_value():
    # a + b*sqrt(root) with a = 0, b = 1/2, root = 5
    x = quadratic(0, Fraction(1, 2), 5)
    assert to_float(x) == pytest.approx(math.sqrt(5) / 2, rel=1e-15)
    assert exact_fraction(x) is None


def test_cosine_angle_special_values():
    # symbolic cosines evaluate through math.cos; identity is by (j, N)
    assert to_float(cosine_angle(0, 4)) == 1.0
    assert to_float(cosine_angle(2, 4)) == -1.0
    assert to_float(cosine_angle(1, 4)) == pytest.approx(0.0, abs=1e-15)
    assert to_float(cosine_angle(1, 6)) == pytest.approx(0.5, rel=1e-15)
    assert to_float(cosine_angle(1, 5)) == pytest.approx((math.sqrt(5) - 1) / 4, rel=1e-15)


@given(st.integers(min_value=1, max_value=30), st.integers(min_value=0, max_value=30))
def test_cosine_angle_matches_float(N, j):
    x = cosine_angle(j, N)
    assert to_float(x) == pytest.approx(math.cos(2 * math.pi * j / N), abs=1e-14)
