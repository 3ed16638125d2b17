"""Fixed points, center manifold and decay brackets of the density system."""

import logging

import numpy as np
from pydantic import BaseModel

from ..exceptions import ParameterError
from ..models import ModelParams, PopDensity
from .system import (
    characteristic_eigenvalues,
    jacobian_at_AA,
    jacobian_at_aa,
    rhs,
)

logger = logging.getLogger(__name__)

STABLE = "stable"
STABLE_DEGENERATE = "stable-degenerate"
UNSTABLE = "unstable"
OTHER = "other"

EIGEN_TOL = 1e-9


class FixedPointReport(BaseModel):
    """Linearization at one equilibrium."""

    name: str
    point: PopDensity
    residual: float
    jacobian: list[list[float]]
    eigenvalues: list[float]
    classification: str


class CenterManifoldModel(BaseModel):
    """Quadratic center-manifold coefficients at the mutant equilibrium.

    ``transform`` acts on coordinates translated to (0, 0, n̄_A) and
    ordered (z, y, x).
    """

    h1: float
    h2: float
    flow_coeff: float
    transform: list[list[float]]


def classify(eigenvalues: np.ndarray) -> str:
    """Stability label from eigenvalue real parts."""
    if np.iscomplexobj(eigenvalues) and np.any(np.abs(eigenvalues.imag) > EIGEN_TOL):
        return OTHER
    real = np.real(eigenvalues)
    if np.any(real > EIGEN_TOL):
        return UNSTABLE
    if np.all(real < -EIGEN_TOL):
        return STABLE
    if np.sum(np.abs(real) <= EIGEN_TOL) == 1:
        return STABLE_DEGENERATE
    return OTHER


def closed_form_eigenvalues(p: ModelParams) -> tuple[list[float], list[float]]:
    """Eigenvalues at (n̄_a,0,0) and (0,0,n̄_A), each ascending."""
    extra = p.death_aA - p.D
    at_aa = sorted([-(p.f - p.D - p.delta), p.delta - extra, -(p.f - p.delta)])
    at_AA = sorted([-p.f - p.delta, -extra, -(p.f - p.D)])
    return at_aa, at_AA


def _report(name: str, point: PopDensity, J: np.ndarray, eigenvalues: list[float], p: ModelParams) -> FixedPointReport:
    check = characteristic_eigenvalues(J)
    if np.max(np.abs(np.real(check) - np.array(eigenvalues))) > 1e-6:
        logger.warning(f"Eigenvalue cross-check mismatch at {name}: {check} vs {eigenvalues}")
    return FixedPointReport(
        name=name,
        point=point,
        residual=float(np.max(np.abs(rhs(point, p)))),
        jacobian=J.tolist(),
        eigenvalues=eigenvalues,
        classification=classify(np.array(eigenvalues)),
    )


def fixed_points(p: ModelParams) -> tuple[FixedPointReport, FixedPointReport]:
    """Reports for the resident and the mutant monomorphic equilibria."""
    at_aa, at_AA = closed_form_eigenvalues(p)
    resident = _report(
        "n_aa", PopDensity(x=p.nbar_a, y=0.0, z=0.0), jacobian_at_aa(p), at_aa, p
    )
    mutant = _report(
        "n_AA", PopDensity(x=0.0, y=0.0, z=p.nbar_A), jacobian_at_AA(p), at_AA, p
    )
    return resident, mutant


def center_manifold(p: ModelParams) -> CenterManifoldModel:
    """Center-manifold coefficients at (0, 0, n̄_A)."""
    f, D, delta = p.f, p.D, p.delta
    if D == 0:
        raise ParameterError("center manifold needs D > 0")
    nbar_A = p.nbar_A
    return CenterManifoldModel(
        h1=f * delta * (2 * D + delta) / (4 * nbar_A * D * (f + delta) * (D + delta)),
        h2=f / (4 * nbar_A * (f + delta)),
        flow_coeff=f * delta / (2 * nbar_A * (f + delta)),
        transform=[
            [1.0, 1.0, D / (D + delta)],
            [0.0, 1.0, 2 * f / (f + delta)],
            [0.0, 0.0, 1.0],
        ],
    )


def decay_bounds(
    p: ModelParams, eps: float, rho: float, t: float | np.ndarray
) -> tuple[float | np.ndarray, float | np.ndarray]:
    """Lower and upper 1/t brackets on the heterozygote density.

    ``t`` is measured from the moment the density equals ``eps``.
    """
    if not 0 < rho < p.f * p.delta:
        raise ParameterError("ϱ must be in (0, fΔ)")
    if eps <= 0:
        raise ParameterError("ε must be > 0")
    scale = 2 * p.nbar_A * (p.f + p.delta)
    t = np.asarray(t, dtype=float)
    lower = scale / ((p.f * p.delta + rho) * t + scale / eps)
    upper = scale / ((p.f * p.delta - rho) * t + scale / eps)
    if lower.ndim == 0:
        return float(lower), float(upper)
    return lower, upper


def center_manifold_decay(p: ModelParams, eps: float, t: float | np.ndarray) -> float | np.ndarray:
    """Density predicted by the reduced flow dv/dt = -a v^2 from v(0) = eps."""
    a = p.f * p.delta / (2 * p.nbar_A * (p.f + p.delta))
    value = eps / (1 + a * eps * np.asarray(t, dtype=float))
    return float(value) if np.ndim(value) == 0 else value
