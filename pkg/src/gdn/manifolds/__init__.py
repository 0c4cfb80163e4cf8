from .core import (
    DeltaBound,
    ManifoldSpec,
    delta_bound,
    k_star,
    resolve_manifold,
    universality_radius,
)
from .gaussian import (
    GaussianParam,
    gaussian_chart,
    gaussian_chart_decode,
    gaussian_chart_encode,
    wasserstein2,
)
from .sym import (
    check_spd,
    check_symmetric,
    frob_unvec,
    frob_vec,
    jacobi_eigh,
    sym_chart,
    sym_chart_decode,
    sym_chart_encode,
    sym_matrix_function,
)
from .zoo import (
    check_point,
    distance,
    exp_map,
    inj_lower,
    log_map,
    mobius_add,
    random_point,
    random_tangent,
    tangent_basis,
)

__all__ = [
    "DeltaBound",
    "ManifoldSpec",
    "delta_bound",
    "k_star",
    "resolve_manifold",
    "universality_radius",
    "GaussianParam",
    "gaussian_chart",
    "gaussian_chart_decode",
    "gaussian_chart_encode",
    "wasserstein2",
    "check_spd",
    "check_symmetric",
    "frob_unvec",
    "frob_vec",
    "jacobi_eigh",
    "sym_chart",
    "sym_chart_decode",
    "sym_chart_encode",
    "sym_matrix_function",
    "check_point",
    "distance",
    "exp_map",
    "inj_lower",
    "log_map",
    "mobius_add",
    "random_point",
    "random_tangent",
    "tangent_basis",
]
