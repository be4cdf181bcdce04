"""Point configurations on spheres: catalog facts, spectra, designs.

Ground truths are classical: inner products of the simplex are -1/n, the
icosahedron's are {-1, +-1/sqrt(5)}, the 240 rescaled minimal vectors in
dimension 8 form a 7-design with spectrum {-1, -1/2, 0, 1/2}.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optima.configurations import (
    catalog,
    catalog_names,
    configuration,
    design_strength,
    distance_distribution,
    inner_product_spectrum,
    load_points,
    random_configuration,
    save_points,
)
from optima.scalars import to_float


def spectrum_floats(C):
    return [to_float(t) for t in inner_product_spectrum(C)]


def test_catalog_names_cover_families():
    names = catalog_names()
    for want in ("simplex", "cross-polytope", "icosahedron", "e8-roots", "ngon"):
        assert want in names


@pytest.mark.parametrize("n", range(2, 9))
def test_simplex_spectrum(n):
    C = catalog("simplex", n)
    assert C.points.shape == (n + 1, n)
    spec = spectrum_floats(C)
    assert len(spec) == 1
    assert spec[0] == pytest.approx(-1 / n, abs=1e-14)


@pytest.mark.parametrize("n", range(2, 9))
def test_cross_polytope_spectrum(n):
    C = catalog("cross-polytope", n)
    assert C.points.shape == (2 * n, n)
    assert spectrum_floats(C) == pytest.approx([-1.0, 0.0], abs=1e-15)
    assert design_strength(C) == 3


def test_icosahedron_facts():
    C = catalog("icosahedron")
    s5 = 1 / math.sqrt(5)
    assert spectrum_floats(C) == pytest.approx([-1.0, -s5, s5], rel=1e-14)
    assert design_strength(C) == 5
    dist = distance_distribution(C)
    counts = {round(to_float(t), 6): c for t, c in dist.entries}
    assert counts[round(s5, 6)] == 60
    assert counts[round(-s5, 6)] == 60
    assert counts[-1.0] == 12
    assert counts[1.0] == 12


def test_octahedron_distribution_sums_to_all_pairs():
    C = catalog("cross-polytope", 3)
    dist = distance_distribution(C)
    assert sum(c for _, c in dist.entries) == 6 * 6


def test_e8_roots_facts():
    C = catalog("e8-roots")
    assert C.points.shape == (240, 8)
    assert np.allclose(np.linalg.norm(C.points, axis=1), 1.0, atol=1e-12)
    assert spectrum_floats(C) == pytest.approx([-1.0, -0.5, 0.0, 0.5], abs=1e-14)
    assert design_strength(C) == 7


def test_e8_roots_integer_half_integer_split():
    # before rescaling, the minimal vectors have squared length 2: 112 with
    # two integer entries +-1, 128 with all entries +-1/2
    C = catalog("e8-roots")
    raw = C.points * math.sqrt(2.0)
    integer_rows = np.all(np.abs(np.abs(raw) - np.round(np.abs(raw))) < 1e-9, axis=1)
    assert int(integer_rows.sum()) == 112
    assert int((~integer_rows).sum()) == 128


@pytest.mark.parametrize("N", range(3, 13))
def test_ngon_spectrum_size(N):
    C = catalog("ngon", N)
    assert C.points.shape == (N, 2)
    # distinct inner products below 1: floor(N/2) values
    assert len(inner_product_spectrum(C)) == N // 2


def test_design_strength_ngon():
    # an N-gon averages trig polynomials exactly up to degree N - 1
    assert design_strength(catalog("ngon", 5)) == 4
    assert design_strength(catalog("ngon", 7)) == 6


def test_random_configuration_on_sphere(rng):
    C = random_configuration(4, 30, rng)
    assert C.points.shape == (30, 4)
    assert np.allclose(np.linalg.norm(C.points, axis=1), 1.0, atol=1e-12)


def test_save_load_round_trip(tmp_path, rng):
    C = random_configuration(3, 11, rng)
    path = tmp_path / "pts.json"
    save_points(C, path)
    D = load_points(path)
    assert D.n == 3
    assert np.allclose(C.points, D.points, atol=0)


def test_configuration_rejects_off_sphere_points():
    with pytest.raises(ValueError):
        configuration([[1.0, 1.0]])


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=2, max_value=20),
       st.integers(min_value=0, max_value=10**6))
def test_distance_distribution_counts_ordered_pairs(n, N, seed):
    C = random_configuration(n, N, np.random.default_rng(seed))
    dist = distance_distribution(C)
    assert sum(c for _, c in dist.entries) == N * N
    # the diagonal contributes exactly N at inner product 1
    top = [c for t, c in dist.entries if to_float(t) == pytest.approx(1.0, abs=1e-12)]
    assert top and top[0] >= N
