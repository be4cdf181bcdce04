"""Projected-gradient energy descent on spheres.

Small-N Coulomb optima on S^2 are classical: 2 points antipodal (E = 1/2),
3 points equilateral (E = sqrt(3)), 4 points tetrahedral, 6 points
octahedral.  Five points split by potential between the triangular
bipyramid and the square pyramid.
"""

import math

import numpy as np
import pytest

from optima.configurations import catalog
from optima.descent import classify_five_points, minimize_energy
from optima.potentials import energy, inverse_power


def coulomb():
    return inverse_power(0.5)  # f(r^2) = r^{-1}


def test_two_points_antipodal():
    res = minimize_energy(3, 2, coulomb(), restarts=3, seed=1)
    assert res.energy == pytest.approx(0.5, abs=1e-9)


def test_three_points_equilateral():
    res = minimize_energy(3, 3, coulomb(), restarts=3, seed=1)
    assert res.energy == pytest.approx(3 / math.sqrt(3), abs=1e-8)


def test_four_points_tetrahedral():
    res = minimize_energy(3, 4, coulomb(), restarts=4, seed=1)
    want = energy(catalog("simplex", 3), coulomb())
    assert res.energy == pytest.approx(want, abs=1e-8)


def test_six_points_octahedral():
    res = minimize_energy(3, 6, coulomb(), restarts=6, seed=2)
    want = energy(catalog("cross-polytope", 3), coulomb())
    assert res.energy == pytest.approx(want, abs=1e-7)


def test_best_is_min_over_restarts():
    res = minimize_energy(3, 7, coulomb(), restarts=5, seed=3)
    assert len(res.per_restart) == 5
    assert res.energy == min(s.energy for s in res.per_restart)
    for stats in res.per_restart:
        if stats.converged:
            assert stats.grad_norm <= 1e-8


def test_deterministic_given_seed():
    a = minimize_energy(3, 5, coulomb(), restarts=3, seed=11)
    b = minimize_energy(3, 5, coulomb(), restarts=3, seed=11)
    assert a.energy == b.energy
    assert np.array_equal(a.best.points, b.best.points)


def test_result_points_stay_on_sphere():
    res = minimize_energy(4, 9, inverse_power(1.0), restarts=3, seed=5)
    assert np.allclose(np.linalg.norm(res.best.points, axis=1), 1.0, atol=1e-12)


def test_five_point_classification_splits_by_potential():
    bipyramid = minimize_energy(3, 5, coulomb(), restarts=10, seed=7)
    assert classify_five_points(bipyramid) == "triangular_bipyramid"
    steep = minimize_energy(3, 5, inverse_power(8.0), restarts=10, seed=7)
    assert classify_five_points(steep) == "square_pyramid"
