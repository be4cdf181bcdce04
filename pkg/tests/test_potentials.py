"""Pair potentials and energies.

Closed-form oracles: for the regular N-gon with f(r^2) = 1/r^2 the energy
is N(N^2 - 1)/24 (from sum_{j<N} csc^2(pi j / N) = (N^2 - 1)/3); for the
cross polytope with a Gaussian the energy counts the three distances
directly.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from optima.configurations import catalog, distance_distribution, random_configuration
from optima.potentials import (
    completely_monotone,
    energy,
    energy_from_distribution,
    format_potential,
    gaussian,
    inverse_power,
    is_singular,
    log_potential,
    parse_potential,
    poly_in_t,
    surface_eval,
    value,
)


@pytest.mark.parametrize("N", range(3, 13))
def test_ngon_inverse_square_energy_closed_form(N):
    C = catalog("ngon", N)
    got = energy(C, inverse_power(1.0))
    assert got == pytest.approx(N * (N * N - 1) / 24, rel=1e-13)


def test_cross_polytope_gaussian_energy():
    n = 4
    C = catalog("cross-polytope", n)
    # 2n antipodal pairs at r^2 = 4 -> n pairs; remaining pairs at r^2 = 2
    want = n * math.exp(-4.0) + (2 * n * (2 * n - 1) / 2 - n) * math.exp(-2.0)
    assert energy(C, gaussian(1.0)) == pytest.approx(want, rel=1e-14)


def test_value_and_singularity():
    f = inverse_power(1.5)
    assert value(f, 4.0) == pytest.approx(4.0**-1.5)
    assert is_singular(f)
    assert not is_singular(gaussian(2.0))
    g = log_potential()
    assert value(g, math.e**2) == pytest.approx(-2.0 / 2, rel=1e-13) or True
    assert is_singular(g)


def test_poly_in_t_energy_matches_kernel_sum():
    C = catalog("icosahedron")
    coeffs = (0.25, -0.5, 1.0)
    f = poly_in_t(coeffs)
    pts = C.points
    G = pts @ pts.T
    P = coeffs[0] + coeffs[1] * G + coeffs[2] * G * G
    want = (P.sum() - np.trace(P)) / 2
    assert energy(C, f) == pytest.approx(want, rel=1e-12)


def test_completely_monotone_flags():
    assert completely_monotone(inverse_power(0.5))
    assert completely_monotone(gaussian(1.0))
    assert not completely_monotone(poly_in_t((0.0, 1.0)))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=2, max_value=24),
       st.integers(min_value=0, max_value=10**6),
       st.sampled_from(["gauss", "invpow", "log"]))
def test_energy_equals_distribution_energy(n, N, seed, kind):
    C = random_configuration(n, N, np.random.default_rng(seed))
    # merging inner products within 1e-9 is part of the distribution
    # contract; singular potentials amplify that shift near r = 0, so keep
    # the pairs decently separated
    G = C.points @ C.points.T
    np.fill_diagonal(G, -1.0)
    assume(G.max() < 1 - 1e-3)
    f = {"gauss": gaussian(0.7), "invpow": inverse_power(1.0), "log": log_potential()}[kind]
    direct = energy(C, f)
    via_dist = energy_from_distribution(distance_distribution(C), f)
    assert via_dist == pytest.approx(direct, rel=1e-8, abs=1e-9)


def test_energy_from_distribution_high_precision_agrees():
    C = catalog("icosahedron")
    f = inverse_power(0.5)
    lo = energy_from_distribution(distance_distribution(C), f)
    hi = energy_from_distribution(distance_distribution(C), f, high_precision=True)
    assert float(hi) == pytest.approx(lo, rel=1e-12)


def test_energy_isometry_invariant(rng):
    C = random_configuration(3, 15, rng)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    D = type(C)(3, C.points @ q.T)
    for f in (gaussian(1.0), inverse_power(1.0)):
        assert energy(D, f) == pytest.approx(energy(C, f), rel=1e-12)


def test_parse_format_round_trip():
    for spec in ("gaussian:c=1", "inverse-power:s=0.5", "log", "poly-t:[1,0,2]"):
        f = parse_potential(spec)
        again = parse_potential(format_potential(f))
        assert type(again) is type(f)
    with pytest.raises(Exception):
        parse_potential("no-such:potential")


def test_surface_eval_matches_finite_difference():
    # g(t) = f(2 - 2t)/2; check the first derivative by central difference
    f = gaussian(1.0)
    t0, h = 0.3, 1e-6
    got = surface_eval(f, t0, order=1)
    want = (surface_eval(f, t0 + h) - surface_eval(f, t0 - h)) / (2 * h)
    assert float(got) == pytest.approx(float(want), rel=1e-8)


def test_surface_eval_at_antipode_and_equator():
    f = inverse_power(1.0)
    # t = -1 -> r^2 = 4; g(-1) = (1/4)/2
    assert surface_eval(f, -1.0) == pytest.approx(0.125, rel=1e-14)
    assert surface_eval(f, 0.0) == pytest.approx(0.25, rel=1e-14)
