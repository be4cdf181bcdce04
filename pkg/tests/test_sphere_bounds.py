"""Energy lower-bound certificates on spheres.

The heavy catalog sweep lives in the acceptance suite; these tests cover
the mechanics: Hermite construction, validity gates, soundness against
random configurations, and payload round trips.
"""

import numpy as np
import pytest

from optima.configurations import catalog, random_configuration
from optima.errors import DesignPreconditionError, VerificationError
from optima.polynomial import Polynomial1D
from optima.potentials import energy, gaussian, inverse_power, poly_in_t
from optima.sphere_bounds import (
    certificate_payload,
    hermite_certificate,
    load_certificate,
    save_certificate,
    sharpness_gap,
    yudin_bound,
)
from fractions import Fraction


@pytest.fixture(scope="module")
def ico_cert():
    return hermite_certificate(catalog("icosahedron"), inverse_power(0.5))


def test_icosahedron_certificate_sharp(ico_cert):
    assert ico_cert.valid and ico_cert.sharp
    assert abs(ico_cert.gap) <= 1e-9 * max(1.0, abs(ico_cert.energy))
    bound = ico_cert.bound_quadratic * 144 + ico_cert.bound_linear * 12
    assert bound == pytest.approx(ico_cert.energy, rel=1e-12)


def test_certificate_nodes_are_the_inner_products(ico_cert):
    from optima.scalars import to_float

    got = sorted(to_float(t) for t in ico_cert.nodes)
    s5 = 5 ** -0.5
    assert got == pytest.approx([-1.0, -s5, s5], rel=1e-12)


def test_simplex_certificate_and_tangent_bound_verify():
    C = catalog("simplex", 4)
    f = inverse_power(0.5)
    cert = hermite_certificate(C, f)
    assert cert.valid and cert.sharp
    # the same h re-verifies through the generic bound path, tangency included
    bound, valid, margins = yudin_bound(4, f, cert.h, C.size, digits=60)
    assert valid
    assert bound <= cert.energy + 1e-12
    assert bound == pytest.approx(cert.energy, abs=1e-10)


def test_non_design_configuration_refused(rng):
    C = random_configuration(3, 7, rng)
    with pytest.raises(DesignPreconditionError):
        hermite_certificate(C, inverse_power(0.5))


def test_certificate_soundness_random_configs(ico_cert, rng):
    # no 12-point configuration on S^2 may beat the certified bound
    bound = ico_cert.bound_quadratic * 144 + ico_cert.bound_linear * 12
    f = inverse_power(0.5)
    for _ in range(25):
        C = random_configuration(3, 12, rng)
        assert energy(C, f) >= bound - 1e-9


def test_invalid_h_is_reported_not_silently_bounded():
    # t has a negative expansion coefficient at k = 1 when negated
    h = Polynomial1D((Fraction(0), Fraction(-1)))
    bound, valid, margins = yudin_bound(3, inverse_power(0.5), h, 10, digits=40)
    assert not valid
    assert margins["failed"].startswith("alpha")
    with pytest.raises(VerificationError):
        sharpness_gap(catalog("icosahedron"), inverse_power(0.5), h)


def test_h_above_g_detected():
    # constant h = 1 exceeds g(t) = (2 - 2t)^{-1/2}/2 near t = -1
    h = Polynomial1D((Fraction(1),))
    bound, valid, margins = yudin_bound(3, inverse_power(0.5), h, 10, digits=40)
    assert not valid
    assert margins["failed"] == "surface"
    assert margins["violation"] is not None


def test_exact_path_polynomial_potential():
    # potential with surface function g(t) = (3 + t)/2; h = g is admissible
    # with exact rational verification, and the bound 1.5 N^2 - 2N is the
    # energy of any configuration summing to zero
    f = poly_in_t((3.0, 1.0))
    h = Polynomial1D((Fraction(3, 2), Fraction(1, 2)))
    bound, valid, margins = yudin_bound(5, f, h, 9, digits=30)
    assert valid
    assert bound == pytest.approx(1.5 * 81 - 2 * 9, rel=1e-12)
    C = catalog("cross-polytope", 5)  # 10 points, sum zero
    assert energy(C, f) == pytest.approx(1.5 * 100 - 2 * 10, rel=1e-12)


def test_payload_save_load_round_trip(tmp_path, ico_cert):
    path = tmp_path / "cert.json"
    save_certificate(ico_cert, path)
    payload = load_certificate(path)
    direct = certificate_payload(ico_cert)
    assert payload["n"] == 3
    assert payload["potential"] == direct["potential"]
    assert payload["bound_coeffs"] == direct["bound_coeffs"]
    assert len(payload["h_monomial"]) == len(ico_cert.h.coeffs)


def test_gaussian_certificate_matches_direct_energy():
    C = catalog("cross-polytope", 5)
    cert = hermite_certificate(C, gaussian(1.0))
    assert cert.valid and cert.sharp
    assert cert.energy == pytest.approx(energy(C, gaussian(1.0)), rel=1e-12)
