"""Ellipsoid minimization of the altitude over the epigraph body ``K(f)``.

The hot loop exists twice: a compiled binary128 kernel and an mpmath twin.
:func:`select_backend` picks the compiled one whenever it is importable and
the requested precision fits.
"""

from .backend import compiled_available, default_precision, select_backend
from .oracle import Halfspace, NearFeasible, weak_separation
from .solver import (
    AltitudeResult,
    Ellipsoid,
    MinimizationResult,
    glp_minimize,
    iteration_cap,
    minimize_altitude,
)

__all__ = [
    "AltitudeResult",
    "Ellipsoid",
    "Halfspace",
    "MinimizationResult",
    "NearFeasible",
    "compiled_available",
    "default_precision",
    "glp_minimize",
    "iteration_cap",
    "minimize_altitude",
    "select_backend",
    "weak_separation",
]
