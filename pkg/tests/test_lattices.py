"""Lattice constructions, enumeration, theta sums, Poisson checks.

Enumeration oracle: a direct integer box search over coordinates, feasible
for n <= 4.  Theta and packing facts come from classical closed forms
(Z^n, D_n, the 8-dimensional even unimodular lattice, hexagonal).
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optima.errors import BudgetError
from optima.lattices import (
    all_norms,
    ball_volume,
    closest_distance2,
    contains,
    deep_hole_check_dn,
    dual,
    enumerate_vectors,
    gaussian_theta,
    kissing_number,
    lattice_catalog,
    lattice_names,
    load_lattice,
    min_norm2,
    minimal_vectors,
    packing_density,
    poisson_check,
    save_lattice,
    scale_lattice,
    shell_counts,
    theta_tail_bound,
)


def brute_norms(basis, r2max):
    """Integer box search; sound for the small well-conditioned bases here."""
    basis = np.asarray(basis, dtype=float)
    n = basis.shape[0]
    # coefficient bound: |x| <= sqrt(r2max) * ||row of inverse||
    inv = np.linalg.inv(basis)
    bounds = np.sqrt(r2max) * np.linalg.norm(inv, axis=0)
    ranges = [range(-int(b) - 1, int(b) + 2) for b in bounds]
    out = []
    for coeffs in itertools.product(*ranges):
        if not any(coeffs):
            continue
        v = np.asarray(coeffs) @ basis
        r2 = float(v @ v)
        if r2 <= r2max + 1e-9:
            out.append(round(r2, 9))
    return sorted(out)


def test_ball_volume_closed_forms():
    assert ball_volume(1, 1.0) == pytest.approx(2.0)
    assert ball_volume(2, 1.0) == pytest.approx(math.pi)
    assert ball_volume(3, 2.0) == pytest.approx(4 / 3 * math.pi * 8)
    assert ball_volume(8, 1.0) == pytest.approx(math.pi**4 / 24)


@pytest.mark.parametrize("name,param,r2", [("zn", 2, 9.0), ("zn", 3, 6.0), ("dn", 3, 8.0), ("dn", 4, 6.0)])
def test_enumeration_matches_brute_force(name, param, r2):
    L = lattice_catalog(name, param)
    norms = all_norms(L, r2)
    assert float(norms[0]) == 0.0  # zero vector included
    ours = sorted(round(float(x), 9) for x in norms if x > 1e-12)
    assert ours == brute_norms(L.basis, r2)


def test_kissing_numbers():
    assert kissing_number(lattice_catalog("e8")) == 240
    assert kissing_number(lattice_catalog("dn", 4)) == 24
    for n in range(1, 9):
        assert kissing_number(lattice_catalog("zn", n)) == 2 * n
    assert kissing_number(lattice_catalog("hexagonal")) == 6


def test_min_norms():
    assert min_norm2(lattice_catalog("e8")) == pytest.approx(2.0)
    assert min_norm2(lattice_catalog("dn", 5)) == pytest.approx(2.0)
    assert min_norm2(lattice_catalog("hexagonal")) == pytest.approx(1.0)


def test_packing_densities():
    assert packing_density(lattice_catalog("e8")) == pytest.approx(math.pi**4 / 384, rel=1e-13)
    assert packing_density(lattice_catalog("hexagonal")) == pytest.approx(math.pi / math.sqrt(12), rel=1e-13)
    assert packing_density(lattice_catalog("zn", 1)) == pytest.approx(1.0, rel=1e-14)
    # the 8-dimensional checkerboard fills half as well
    assert packing_density(lattice_catalog("e8")) == pytest.approx(
        2 * packing_density(lattice_catalog("dn", 8)), rel=1e-12
    )


def test_e8_shells_match_theta_series():
    # theta_{e8} = 1 + 240 q^2 + 2160 q^4 + 6720 q^6 + ... (240 sigma_3(k))
    L = lattice_catalog("e8")
    vals, counts = shell_counts(L, 8.0)
    got = dict(zip([round(float(v)) for v in vals], [int(c) for c in counts]))
    assert got == {2: 240, 4: 2160, 6: 6720, 8: 17520}


def test_dual_constructions():
    e8 = lattice_catalog("e8")
    d = dual(e8)
    # self-dual: same covolume 1 and same shell structure
    assert d.covolume() == pytest.approx(1.0, rel=1e-12)
    assert min_norm2(d) == pytest.approx(2.0)
    z3 = lattice_catalog("zn", 3)
    assert dual(z3).covolume() == pytest.approx(1.0)
    dn4 = lattice_catalog("dn", 4)
    assert dual(dn4).covolume() * dn4.covolume() == pytest.approx(1.0, rel=1e-12)


def test_dual_of_dual_round_trip():
    for name, param in (("dn", 3), ("dn", 5), ("hexagonal", None)):
        L = lattice_catalog(name, param)
        dd = dual(dual(L))
        assert dd.covolume() == pytest.approx(L.covolume(), rel=1e-12)
        assert min_norm2(dd) == pytest.approx(min_norm2(L), rel=1e-12)


def test_contains_membership():
    e8 = lattice_catalog("e8")
    assert contains(e8, [1, -1, 0, 0, 0, 0, 0, 0])
    halves = [Fraction(1, 2)] * 8
    assert contains(e8, halves)
    assert not contains(e8, [1, 0, 0, 0, 0, 0, 0, 0])


def test_minimal_vectors_come_in_opposite_pairs():
    vecs = minimal_vectors(lattice_catalog("dn", 4))
    assert len(vecs) == 24
    arr = np.asarray(vecs)
    for v in arr:
        assert any(np.allclose(-v, w) for w in arr)


def test_gaussian_theta_z1_closed_form():
    # jacobi theta3: sum_k exp(-pi k^2) = pi^{1/4}/Gamma(3/4)
    L = lattice_catalog("zn", 1)
    want = math.pi**0.25 / math.gamma(0.75)
    assert gaussian_theta(L, 1.0, 40.0) == pytest.approx(want, rel=1e-13)


def test_theta_tail_bound_dominates_true_tail():
    L = lattice_catalog("zn", 2)
    s = 0.8
    full = gaussian_theta(L, s, 60.0)
    for r2 in (4.0, 9.0, 16.0):
        head = gaussian_theta(L, s, r2)
        assert theta_tail_bound(L, s, r2) >= full - head - 1e-15


def test_enumeration_budget_error():
    with pytest.raises(BudgetError):
        all_norms(lattice_catalog("zn", 4), 1e6)


def test_closest_distance_deep_hole():
    z2 = lattice_catalog("zn", 2)
    assert closest_distance2(z2, [0.5, 0.5]) == pytest.approx(0.5, rel=1e-9)
    assert closest_distance2(z2, [0.25, 0.0]) == pytest.approx(0.0625, rel=1e-9)


@pytest.mark.parametrize("n", [4, 8, 16])
def test_dn_deep_holes(n):
    rep = deep_hole_check_dn(n)
    assert rep.all_halves_distance2 == Fraction(n, 4)
    assert rep.distance == pytest.approx(math.sqrt(n) / 2)
    assert rep.integer_hole_distance2 == 1
    assert rep.covering_radius2 == max(Fraction(n, 4), 1)
    # 2h has even coordinate sum for even n, so the union closes under addition
    assert rep.union_is_lattice
    assert rep.union_min_norm2 == (2 if n >= 8 else 1)
    assert rep.fills_to_e8 == (n == 8)


def test_poisson_identity_across_widths():
    for name, param in (("zn", 2), ("dn", 4), ("e8", None), ("hexagonal", None)):
        L = lattice_catalog(name, param)
        for s in (0.5, 1.0, 2.0):
            rep = poisson_check(L, s)
            assert rep.discrepancy <= 1e-10, (name, s, rep.discrepancy)


def test_poisson_scaling_relation():
    # theta_L(s) for the scaled lattice equals theta at the rescaled width
    L = lattice_catalog("zn", 2)
    L2 = scale_lattice(L, 4)
    assert gaussian_theta(L2, 1.0, 80.0) == pytest.approx(gaussian_theta(L, 4.0, 20.0), rel=1e-12)


def test_save_load_round_trip(tmp_path):
    L = lattice_catalog("dn", 5)
    path = tmp_path / "lat.json"
    save_lattice(L, path)
    M = load_lattice(path)
    assert M.n == 5
    assert np.allclose(M.basis, L.basis)
    assert min_norm2(M) == pytest.approx(2.0)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.floats(min_value=0.3, max_value=3.0))
def test_poisson_holds_for_zn(n, s):
    rep = poisson_check(lattice_catalog("zn", n), s)
    assert rep.discrepancy <= 1e-10


def test_unknown_lattice_name():
    from optima.errors import UnknownNameError

    with pytest.raises(UnknownNameError):
        lattice_catalog("leech")
