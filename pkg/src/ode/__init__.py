"""Deterministic large-population system."""

from .analysis import (
    CenterManifoldModel,
    FixedPointReport,
    center_manifold,
    center_manifold_decay,
    classify,
    decay_bounds,
    fixed_points,
)
from .integrator import DenseTrajectory, OdeState, integrate, level_event, restart_at_level
from .system import (
    characteristic_eigenvalues,
    jacobian,
    jacobian_at_AA,
    jacobian_at_aa,
    jacobian_numeric,
    rhs,
    vector_field,
)

__all__ = [
    "CenterManifoldModel",
    "DenseTrajectory",
    "FixedPointReport",
    "OdeState",
    "center_manifold",
    "center_manifold_decay",
    "characteristic_eigenvalues",
    "classify",
    "decay_bounds",
    "fixed_points",
    "integrate",
    "jacobian",
    "jacobian_at_AA",
    "jacobian_at_aa",
    "jacobian_numeric",
    "level_event",
    "restart_at_level",
    "rhs",
    "vector_field",
]
