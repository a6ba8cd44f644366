"""Certified spectral radii of nonnegative (quasi-)homogeneous maps, forms and
hypergraphs, through ellipsoid minimization of max-of-log-sum-exp objectives.
"""

from .coercivity import (
    BoundBundle,
    bound_bundle,
    compute_nu,
    hadamard_nu_bound,
    is_coercive,
    minimizer_box,
)
from .ellipsoid import (
    Halfspace,
    NearFeasible,
    compiled_available,
    glp_minimize,
    minimize_altitude,
    weak_separation,
)
from .errors import (
    CoercivityError,
    InputError,
    PrecisionError,
    ReducibilityError,
    TensorRhoError,
    UnsupportedError,
)
from .exponent_core import (
    IntegerizedProblem,
    MaxLogSumExp,
    PosExponentSum,
    eval_f,
    integerize,
)
from .tensor_reduction import (
    MonomialMap,
    NonnegForm,
    SpectralResult,
    UniformHypergraph,
    alpha_dp,
    alpha_dp_exact,
    clique_upper_bound,
    connected_components,
    cw_bounds,
    dependency_digraph,
    grad_map,
    hypergraph_rho,
    is_weakly_irreducible,
    mu_d,
    mu_p_lifted,
    reduce_to_f,
    spectral_radius,
)

__version__ = "0.1.0"

__all__ = [
    "BoundBundle",
    "CoercivityError",
    "Halfspace",
    "InputError",
    "IntegerizedProblem",
    "MaxLogSumExp",
    "MonomialMap",
    "NearFeasible",
    "NonnegForm",
    "PosExponentSum",
    "PrecisionError",
    "ReducibilityError",
    "SpectralResult",
    "TensorRhoError",
    "UniformHypergraph",
    "UnsupportedError",
    "alpha_dp",
    "alpha_dp_exact",
    "bound_bundle",
    "clique_upper_bound",
    "compiled_available",
    "compute_nu",
    "connected_components",
    "cw_bounds",
    "dependency_digraph",
    "eval_f",
    "glp_minimize",
    "grad_map",
    "hadamard_nu_bound",
    "hypergraph_rho",
    "integerize",
    "is_coercive",
    "is_weakly_irreducible",
    "minimize_altitude",
    "minimizer_box",
    "mu_d",
    "mu_p_lifted",
    "reduce_to_f",
    "spectral_radius",
    "weak_separation",
]
