"""Right-hand side and Jacobians of the deterministic density system.

State ordering is (x, y, z) = (aa, aA, AA) densities.
"""

import numpy as np

from ..models import ModelParams, PopDensity


def vector_field(state: np.ndarray, p: ModelParams) -> np.ndarray:
    """Time derivative of the densities; zero at the empty state."""
    x, y, z = state
    sigma = x + y + z
    if sigma <= 0:
        return np.zeros(3)
    P = x + y / 2
    Q = z + y / 2
    crowding = p.c * sigma
    return np.array(
        [
            p.f * P * P / sigma - (p.D + p.delta + crowding) * x,
            2 * p.f * P * Q / sigma - (p.death_aA + crowding) * y,
            p.f * Q * Q / sigma - (p.D + crowding) * z,
        ]
    )


def rhs(state: PopDensity, p: ModelParams) -> np.ndarray:
    """Derivative (dx/dt, dy/dt, dz/dt) at a density state."""
    return vector_field(np.array(state.as_tuple(), dtype=float), p)


def jacobian(point: PopDensity | np.ndarray, p: ModelParams) -> np.ndarray:
    """Analytic Jacobian of the vector field at a nonempty point."""
    if isinstance(point, PopDensity):
        point = np.array(point.as_tuple(), dtype=float)
    x, y, z = point
    f, c = p.f, p.c
    sigma = x + y + z
    P = x + y / 2
    Q = z + y / 2
    s2 = sigma * sigma
    deaths = (p.D + p.delta, p.death_aA, p.D)

    J = np.empty((3, 3))
    J[0] = [
        2 * f * P / sigma - f * P * P / s2 - (deaths[0] + c * sigma) - c * x,
        f * P / sigma - f * P * P / s2 - c * x,
        -f * P * P / s2 - c * x,
    ]
    J[1] = [
        2 * f * Q / sigma - 2 * f * P * Q / s2 - c * y,
        f * (P + Q) / sigma - 2 * f * P * Q / s2 - (deaths[1] + c * sigma) - c * y,
        2 * f * P / sigma - 2 * f * P * Q / s2 - c * y,
    ]
    J[2] = [
        -f * Q * Q / s2 - c * z,
        f * Q / sigma - f * Q * Q / s2 - c * z,
        2 * f * Q / sigma - f * Q * Q / s2 - (deaths[2] + c * sigma) - c * z,
    ]
    return J


def jacobian_at_aa(p: ModelParams) -> np.ndarray:
    """Closed-form Jacobian at the resident equilibrium (n̄_a, 0, 0)."""
    f, D, delta = p.f, p.D, p.delta
    extra = p.death_aA - D
    return np.array(
        [
            [-f + D + delta, -f + D + delta, -2 * f + D + delta],
            [0.0, delta - extra, 2 * f],
            [0.0, 0.0, -f + delta],
        ]
    )


def jacobian_at_AA(p: ModelParams) -> np.ndarray:
    """Closed-form Jacobian at the mutant equilibrium (0, 0, n̄_A)."""
    f, D, delta = p.f, p.D, p.delta
    extra = p.death_aA - D
    return np.array(
        [
            [-f - delta, 0.0, 0.0],
            [2 * f, -extra, 0.0],
            [-2 * f + D, -f + D, -f + D],
        ]
    )


def jacobian_numeric(point: PopDensity | np.ndarray, p: ModelParams, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference Jacobian, column j from steps along e_j."""
    if isinstance(point, PopDensity):
        point = np.array(point.as_tuple(), dtype=float)
    point = np.asarray(point, dtype=float)
    J = np.empty((3, 3))
    for j in range(3):
        step = np.zeros(3)
        step[j] = h
        J[:, j] = (vector_field(point + step, p) - vector_field(point - step, p)) / (2 * h)
    return J


def characteristic_eigenvalues(J: np.ndarray) -> np.ndarray:
    """Roots of det(λI - J) from trace, principal minors and determinant.

    Returned ascending by real part; real dtype when all roots are real.
    """
    trace = np.trace(J)
    minors = (
        J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
        + J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1]
    )
    det = np.linalg.det(J)
    roots = np.roots([1.0, -trace, minors, -det])
    if np.all(np.abs(roots.imag) < 1e-9):
        roots = roots.real
    return roots[np.argsort(roots.real)]
