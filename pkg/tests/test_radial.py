"""Laguerre radial eigenbasis used by the density-bound machinery.

Oracle: scipy.special.genlaguerre supplies the classical generalized
Laguerre polynomials; the basis functions here are L_k^{(n/2-1)}(2 pi t)
e^{-pi t} in the squared radius t.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import genlaguerre

from optima.radial import (
    alpha_param,
    combo_u_poly,
    eigenbasis_values,
    fourier_eigenbasis_value,
    laguerre_at_zero,
    laguerre_at_zero_float,
    laguerre_u_poly,
    transform_parity,
    weighted_laguerre_rows,
)


def test_alpha_param():
    assert alpha_param(2) == Fraction(0)
    assert alpha_param(3) == Fraction(1, 2)
    assert alpha_param(8) == Fraction(3)


@pytest.mark.parametrize("n", [1, 2, 3, 8])
@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_laguerre_polys_match_scipy(n, k):
    p = laguerre_u_poly(n, k)
    ref = genlaguerre(k, float(alpha_param(n)))
    got = [float(c) for c in p.coeffs]
    want = list(ref.coeffs[::-1])
    assert got == pytest.approx(want, rel=1e-10)


def test_laguerre_at_zero_binomials():
    # L_k^{(a)}(0) = C(k + a, k)
    assert laguerre_at_zero(8, 2) == Fraction(10)  # C(5, 2)
    assert laguerre_at_zero(2, 3) == Fraction(1)
    assert laguerre_at_zero_float(8, 2) == pytest.approx(10.0)


def test_weighted_rows_match_direct_evaluation():
    n, kmax = 8, 12
    us = np.linspace(0.0, 60.0, 7)
    rows = weighted_laguerre_rows(n, kmax, us)
    for j, u in enumerate(us):
        for k in (0, 3, kmax):
            ref = genlaguerre(k, float(alpha_param(n)))(u) * math.exp(-u / 2)
            assert rows[j, k] == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_eigenbasis_at_origin():
    n = 8
    vals = eigenbasis_values(n, 4, np.array([0.0]), r_min=1.0)
    for k in range(5):
        assert vals[0, k] == pytest.approx(laguerre_at_zero_float(n, k))


def test_fourier_eigenbasis_scalar_matches_rows():
    n, k = 3, 4
    r2 = 1.7
    got = fourier_eigenbasis_value(n, k, r2, r_min=1.0)
    u = 2 * math.pi * r2
    want = genlaguerre(k, float(alpha_param(n)))(u) * math.exp(-u / 2)
    assert got == pytest.approx(want, rel=1e-12)


def test_transform_parity_signs():
    assert transform_parity(0) == 1
    assert transform_parity(1) == -1
    assert transform_parity(6) == 1


def test_combo_u_poly_signed_flips_odd_terms():
    n = 4
    coeffs = [1.0, 0.5, -0.25, 2.0]
    A = combo_u_poly(n, coeffs, signed=False)
    B = combo_u_poly(n, coeffs, signed=True)
    flipped = [(-1) ** k * c for k, c in enumerate(coeffs)]
    C = combo_u_poly(n, flipped, signed=False)
    assert [float(c) for c in B.coeffs] == pytest.approx([float(c) for c in C.coeffs], rel=1e-15)
    assert float(A(Fraction(0))) == pytest.approx(sum(
        c * laguerre_at_zero_float(n, k) for k, c in enumerate(coeffs)))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=10),
       st.floats(min_value=0.0, max_value=80.0))
def test_recurrence_stability_against_scipy(n, k, u):
    rows = weighted_laguerre_rows(n, k, np.array([u]))
    ref = genlaguerre(k, float(alpha_param(n)))(u) * math.exp(-u / 2)
    assert rows[0, k] == pytest.approx(ref, rel=1e-8, abs=1e-250)
