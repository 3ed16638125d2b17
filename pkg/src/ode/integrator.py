"""Adaptive Runge-Kutta integration of the density system."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel
from scipy.integrate import OdeSolution, solve_ivp

from ..exceptions import ParameterError, StiffRegionError
from ..models import ModelParams, PopDensity
from .system import vector_field

logger = logging.getLogger(__name__)

CLAMP_THRESHOLD = 1e-14
ODE_COLUMNS = ["t", "x_aa", "y_aA", "z_AA"]


class OdeState(BaseModel):
    """Densities at one time of an integrated path."""

    t: float
    state: PopDensity


def _clamp(values: np.ndarray) -> np.ndarray:
    """Zero out roundoff negatives; larger negatives are left visible."""
    values = np.array(values, dtype=float)
    values[(values < 0) & (values > -CLAMP_THRESHOLD)] = 0.0
    return values


@dataclass
class DenseTrajectory:
    """Integrated path with a continuous interpolant."""

    t: np.ndarray
    states: np.ndarray  # shape (3, len(t))
    solution: OdeSolution
    t_events: list[np.ndarray]

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    def __call__(self, t: float | np.ndarray) -> np.ndarray:
        """Interpolated state(s), time clamped to the integrated range."""
        t = np.clip(t, self.t[0], self.t[-1])
        return _clamp(self.solution(t))

    def state_at(self, t: float) -> PopDensity:
        x, y, z = np.maximum(self(t), 0.0)
        return PopDensity(x=x, y=y, z=z)

    def final_state(self) -> PopDensity:
        return self.state_at(self.t_end)

    def to_frame(self, times: Optional[np.ndarray] = None) -> pd.DataFrame:
        """Table with columns ``t,x_aa,y_aA,z_AA``; solver steps by default."""
        if times is None:
            times, states = self.t, self.states
        else:
            states = self(times)
        return pd.DataFrame(
            {"t": times, "x_aa": states[0], "y_aA": states[1], "z_AA": states[2]},
            columns=ODE_COLUMNS,
        )

    def sampled(self, dt: float) -> pd.DataFrame:
        """Table on the grid 0, dt, 2dt, ... up to the end time."""
        times = self.t[0] + np.arange(0.0, self.t_end - self.t[0] + dt / 2, dt)
        return self.to_frame(times)


def integrate(
    p: ModelParams,
    init: PopDensity,
    t_end: float,
    tol: float = 1e-9,
    atol: float = 1e-12,
    events: Optional[list[Callable]] = None,
    t_start: float = 0.0,
) -> DenseTrajectory:
    """Integrate from ``init`` with an embedded 5(4) Runge-Kutta pair.

    Args:
        p: Model parameters
        init: Initial densities
        t_end: Final time
        tol: Relative tolerance
        atol: Absolute tolerance
        events: solve_ivp event functions of (t, state)
        t_start: Initial time

    Returns:
        DenseTrajectory

    Raises:
        StiffRegionError: If the step size underflows
    """
    if t_end <= t_start:
        raise ParameterError("t_end must be after the initial time")
    result = solve_ivp(
        lambda t, state: vector_field(state, p),
        (t_start, t_end),
        np.array(init.as_tuple(), dtype=float),
        method="RK45",
        rtol=tol,
        atol=atol,
        dense_output=True,
        events=events,
    )
    if result.status == -1:
        logger.error(f"Integration failed at t={result.t[-1]:.4f}: {result.message}")
        raise StiffRegionError("stiff region; reduce tol or t_end")
    return DenseTrajectory(
        t=result.t,
        states=_clamp(result.y),
        solution=result.sol,
        t_events=list(result.t_events) if result.t_events is not None else [],
    )


def level_event(level: float, component: int = 1) -> Callable:
    """Terminal event for a downward crossing of ``component == level``."""

    def crossing(t: float, state: np.ndarray) -> float:
        return state[component] - level

    crossing.terminal = True
    crossing.direction = -1
    return crossing


def restart_at_level(
    p: ModelParams,
    init: PopDensity,
    level: float,
    t_limit: float,
    tol: float = 1e-9,
    atol: float = 1e-12,
) -> Optional[OdeState]:
    """First time the heterozygote density falls through ``level``.

    Returns:
        OdeState at the crossing, or None if no crossing before ``t_limit``
    """
    path = integrate(p, init, t_limit, tol=tol, atol=atol, events=[level_event(level)])
    hits = path.t_events[0] if path.t_events else np.array([])
    if len(hits) == 0:
        return None
    t_hit = float(hits[0])
    return OdeState(t=t_hit, state=path.state_at(t_hit))
