"""Point configurations on spheres, linear-programming bounds, and lattice packings."""

from optima.polynomial import Polynomial1D
from optima.gegenbauer import GegenbauerExpansion, gegenbauer, expand
from optima.potentials import (
    Potential,
    inverse_power,
    gaussian,
    log_potential,
    poly_in_t,
    parse_potential,
    format_potential,
    energy,
    energy_from_distribution,
)
from optima.configurations import (
    Configuration,
    DistanceDistribution,
    catalog,
    catalog_names,
    distance_distribution,
    design_strength,
    load_points,
    save_points,
)
from optima.lattices import (
    Lattice,
    lattice_catalog,
    dual,
    enumerate_vectors,
    packing_density,
    kissing_number,
    deep_hole_check_dn,
    poisson_check,
)
from optima.descent import DescentResult, minimize_energy, classify_five_points
from optima.sphere_bounds import SphericalCertificate, yudin_bound, hermite_certificate, sharpness_gap
from optima.euclid_bounds import (
    RadialAux,
    aux_value,
    aux_transform_value,
    verify_and_bound,
    optimize_aux,
    taylor_probe,
    lattice_poisson_bound_check,
)
from optima.saturation import TorusPacking, saturate

__all__ = [
    "Polynomial1D",
    "GegenbauerExpansion",
    "gegenbauer",
    "expand",
    "Potential",
    "inverse_power",
    "gaussian",
    "log_potential",
    "poly_in_t",
    "parse_potential",
    "format_potential",
    "energy",
    "energy_from_distribution",
    "Configuration",
    "DistanceDistribution",
    "catalog",
    "catalog_names",
    "distance_distribution",
    "design_strength",
    "load_points",
    "save_points",
    "Lattice",
    "lattice_catalog",
    "dual",
    "enumerate_vectors",
    "packing_density",
    "kissing_number",
    "deep_hole_check_dn",
    "poisson_check",
    "DescentResult",
    "minimize_energy",
    "classify_five_points",
    "SphericalCertificate",
    "yudin_bound",
    "hermite_certificate",
    "sharpness_gap",
    "RadialAux",
    "aux_value",
    "aux_transform_value",
    "verify_and_bound",
    "optimize_aux",
    "taylor_probe",
    "lattice_poisson_bound_check",
    "TorusPacking",
    "saturate",
]
