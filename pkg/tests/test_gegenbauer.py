"""Ultraspherical polynomial suite.

Oracles: scipy.special.roots_jacobi supplies Gauss quadrature for the
weight (1 - t^2)^((n-3)/2), and scipy.special.eval_gegenbauer supplies an
independent evaluation of the classical (non-monic) polynomials.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_gegenbauer, roots_jacobi

from optima.gegenbauer import eval_all, expand, gegenbauer, gegenbauer_table, recurrence_b
from optima.polynomial import Polynomial1D

DIMS = (3, 4, 5, 8)
KMAX = 16


def quad_nodes(n, deg):
    # Gauss-Jacobi with alpha = beta = (n-3)/2 integrates the sphere weight
    a = (n - 3) / 2
    return roots_jacobi((deg + 2) // 2 + 1, a, a)


@pytest.mark.parametrize("n", DIMS)
def test_quadrature_orthogonality(n):
    ts, ws = quad_nodes(n, 2 * KMAX)
    vals = eval_all(n, KMAX, ts)
    gram = np.einsum("j,ij,kj->ik", ws, vals, vals)
    diag = np.diag(gram).copy()
    off = gram - np.diag(diag)
    assert np.all(diag > 0)
    rel = np.abs(off) / np.sqrt(np.outer(diag, diag))
    assert rel.max() <= 1e-12


@pytest.mark.parametrize("n", DIMS)
def test_degree_two_closed_form(n):
    p = gegenbauer(n, 2)
    assert p.coeffs == (Fraction(-1, n), Fraction(0), Fraction(1))


@pytest.mark.parametrize("n", DIMS)
def test_monic_round_trip_exact(n):
    table = gegenbauer_table(n, KMAX)
    for k, p in enumerate(table):
        assert p.coeffs[-1] == 1  # monic
        e = expand(p, n)
        want = tuple(Fraction(1) if j == k else Fraction(0) for j in range(k + 1))
        assert e.coeffs == want


@pytest.mark.parametrize("n", DIMS)
def test_matches_scipy_up_to_leading_factor(n):
    lam = (n - 2) / 2
    ts = np.linspace(-1, 1, 41)
    for k in range(1, 11):
        ours = eval_all(n, k, ts)[k]
        ref = eval_gegenbauer(k, lam, ts)
        # both vanish at the same points; ratio of leading coefficients
        scale = ref[-1] / ours[-1]  # at t = 1
        assert np.allclose(ref, scale * ours, rtol=1e-10, atol=1e-10)


def test_recurrence_b_positive():
    for n in DIMS:
        for k in range(1, KMAX):
            assert 0 < recurrence_b(n, k) < 1


@settings(max_examples=60)
@given(
    st.integers(min_value=3, max_value=8),
    st.integers(min_value=1, max_value=12),
    st.floats(min_value=-1, max_value=1, allow_nan=False),
)
def test_three_term_recurrence_pointwise(n, k, t):
    vals = eval_all(n, k + 1, t)
    lhs = vals[k + 1]
    rhs = t * vals[k] - float(recurrence_b(n, k)) * vals[k - 1]
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_expansion_reconstructs_polynomial():
    n = 5
    p = Polynomial1D((Fraction(2), Fraction(-1), Fraction(0), Fraction(3)))
    e = expand(p, n)
    ts = np.linspace(-1, 1, 17)
    vals = eval_all(n, len(e.coeffs) - 1, ts)
    recon = sum(float(a) * vals[k] for k, a in enumerate(e.coeffs))
    direct = [float(p(Fraction(t))) for t in ts]
    assert np.allclose(recon, direct, atol=1e-12)
