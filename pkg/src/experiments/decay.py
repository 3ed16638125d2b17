"""Heterozygote decay: ODE brackets, stochastic comparison and path distances."""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from ..exceptions import ExperimentError, ParameterError
from ..models import AnalysisParams, ModelParams, PopCount, PopDensity
from ..ode import decay_bounds, integrate, level_event, restart_at_level
from ..rates import validate_analysis, validate_params
from ..ssa import RecordMode, StopReason, StopSpec, Trajectory, run_replicas, simulate
from .fixation import resident_with_mutant
from .schemas import (
    ApproximationRecord,
    ApproximationReport,
    DecayComparisonReport,
    DecaySample,
    DeterministicDecayReport,
)
from .statistics import quantiles

logger = logging.getLogger(__name__)

# Relative slack when comparing against the brackets
BRACKET_RTOL = 1e-7
RESTART_LIMIT = 1e4
DECAY_LIMIT = 1e6


def invasion_start(p: ModelParams, a: AnalysisParams) -> PopDensity:
    """Initial densities (n̄_a - δ, δ, 0)."""
    return PopDensity(x=p.nbar_a - a.delta_fix, y=a.delta_fix, z=0.0)


def _within(y: np.ndarray, lower: np.ndarray, upper: np.ndarray, slack: float | np.ndarray = 0.0) -> np.ndarray:
    return (y >= lower * (1 - BRACKET_RTOL) - slack) & (y <= upper * (1 + BRACKET_RTOL) + slack)


def deterministic_decay(
    p: ModelParams,
    a: AnalysisParams,
    init: Optional[PopDensity] = None,
    tail_level: Optional[float] = None,
) -> DeterministicDecayReport:
    """Check the 1/t bracket and the tail shape of the integrated density.

    The bracket clock starts at the first downward crossing of y = eps and
    the check runs until y <= eps/100. The tail fits use y <= tail_level
    (default eps/30).

    Args:
        p: Model parameters; codominant gives the exponential contrast
        a: Analysis parameters, rho defaults to f*delta/2
        init: Initial densities, defaults to invasion_start
        tail_level: Upper density of the fitted tail

    Returns:
        DeterministicDecayReport
    """
    validate_params(p)
    validate_analysis(a, p)
    init = init or invasion_start(p, a)
    tail_level = tail_level or a.eps / 30
    end_level = a.eps / 100

    restart = restart_at_level(p, init, a.eps, RESTART_LIMIT)
    if restart is None:
        raise ExperimentError(f"heterozygote density never fell through ε={a.eps}")
    restart_time, restart_state = restart.t, restart.state
    logger.info(f"Restarting bracket clock at t={restart_time:.3f}")

    path = integrate(p, restart_state, DECAY_LIMIT, events=[level_event(end_level)])
    t = path.t - path.t[0]
    y = path.states[1]
    lower, upper = decay_bounds(p, a.eps, a.resolved_rho(p), t)
    inside = _within(y, lower, upper)
    first_violation = float(t[~inside][0]) if not inside.all() else None

    tail_slope = loglog_r2 = exp_r2 = None
    tail = y <= tail_level
    if tail.sum() >= 3 and t[tail][-1] > t[tail][0]:
        grid = np.geomspace(max(t[tail][0], 1e-9), t[tail][-1], 200)
        y_grid = path(path.t[0] + grid)[1]
        positive = y_grid > 0
        loglog = stats.linregress(np.log(grid[positive]), np.log(y_grid[positive]))
        semilog = stats.linregress(grid[positive], np.log(y_grid[positive]))
        tail_slope = float(loglog.slope)
        loglog_r2 = float(loglog.rvalue ** 2)
        exp_r2 = float(semilog.rvalue ** 2)
    else:
        logger.warning("Tail too short for slope fits")

    return DeterministicDecayReport(
        params=p,
        analysis=a,
        dominance=p.dominance,
        restart_time=restart_time,
        restart_state=restart_state,
        end_time=float(t[-1]),
        samples=int(t.size),
        within_fraction=float(inside.mean()),
        first_violation=first_violation,
        tail_slope=tail_slope,
        loglog_r_squared=loglog_r2,
        exponential_r_squared=exp_r2,
    )


def density_grid(
    trajectory: Trajectory, final_state: PopCount, K: int, horizon: float, dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """Sampled densities on the full grid 0, dt, ... <= horizon.

    A run that stopped early (extinction) keeps its final state on the
    remaining grid times.

    Returns:
        (times, 3 x n array of x, y, z)
    """
    times = dt * np.arange(math.floor(horizon / dt) + 2)
    times = times[times <= horizon]
    states = np.repeat(
        np.array([final_state.n_aa, final_state.n_aA, final_state.n_AA], dtype=float)[:, None] / K,
        times.size,
        axis=1,
    )
    frame = trajectory.density_frame(K)
    recorded = min(len(frame), times.size)
    states[:, :recorded] = frame[["x_aa", "y_aA", "z_AA"]].to_numpy()[:recorded].T
    return times, states


def _first_eps_hit(
    p: ModelParams, a: AnalysisParams, seed: int, max_attempts: int
) -> tuple[int, float, PopCount]:
    """First replica that fixes and brings the heterozygotes down to eps."""
    stop = StopSpec(
        delta_fix=a.delta_fix,
        stop_on_loss=True,
        hit_levels=[a.eps],
        stop_on_hits=True,
    )
    init = resident_with_mutant(p)
    for replica in range(max_attempts):
        _, record = simulate(p, init, stop, seed, replica=replica)
        if record.reason == StopReason.HITS_COMPLETE and record.fixed:
            logger.info(f"Replica {replica} reached ε at t={record.tau_hit[a.eps]:.3f}")
            return replica, record.tau_hit[a.eps], record.hit_states[a.eps]
    raise ExperimentError(f"no fixing replica within {max_attempts} attempts")


def decay_comparison(
    p: ModelParams,
    a: AnalysisParams,
    K: int,
    seed: int,
    dt: float = 1.0,
    horizon: float = 200.0,
    margin: float = 10.0,
    distance_horizon: float = 20.0,
    max_attempts: int = 1000,
) -> DecayComparisonReport:
    """Compare one conditioned stochastic path with the ODE after tau_eps^hit.

    Both start from the state at the heterozygote hit of eps; the bracket
    starts from the matched heterozygote density.

    Args:
        p: Model parameters (K replaced)
        a: Analysis parameters
        K: Carrying capacity
        seed: Base seed
        dt: Sampling interval
        horizon: Length of the compared window
        margin: Stochastic slack in units of K^-1/2
        distance_horizon: Window of the sup-distance
        max_attempts: Replicas tried for a fixing path

    Returns:
        DecayComparisonReport
    """
    validate_params(p)
    validate_analysis(a, p)
    if p.mu != 0:
        raise ParameterError("decay comparison needs mu = 0")
    if K < 1000:
        logger.warning(f"K={K} is small for a decay comparison")
    pK = p.model_copy(update={"K": K})
    replica, tau_eps, state = _first_eps_hit(pK, a, seed, max_attempts)
    matched = state.density(K)
    if state.n_aA == 0:
        raise ExperimentError(f"ε·K is below one heterozygote at K={K}")

    continuation, end = simulate(
        pK, state, StopSpec(t_max=horizon), seed,
        mode=RecordMode.SAMPLED, replica=replica, stream_key=(1,), dt=dt,
    )
    times, stoch_states = density_grid(continuation, end.final_state, K, horizon, dt)
    ode = integrate(pK, matched, horizon)
    ode_states = ode(times)

    y_stoch = stoch_states[1]
    y_ode = ode_states[1]
    lower, upper = decay_bounds(pK, matched.y, a.resolved_rho(pK), times)
    slack = margin / math.sqrt(K)
    window = times <= distance_horizon
    sup_distance = float(np.max(np.abs(stoch_states[:, window] - ode_states[:, window])))

    series = [
        DecaySample(t=float(ti), y_stochastic=float(ys), y_ode=float(yo), lower=float(lo), upper=float(up))
        for ti, ys, yo, lo, up in zip(times, y_stoch, y_ode, lower, upper)
    ]
    return DecayComparisonReport(
        params=pK,
        analysis=a,
        K=K,
        seed=seed,
        replica=replica,
        dt=dt,
        margin=margin,
        tau_eps=tau_eps,
        matched_state=matched,
        stochastic_within_fraction=float(_within(y_stoch, lower, upper, slack).mean()),
        ode_within_fraction=float(_within(y_ode, lower, upper).mean()),
        sup_distance=sup_distance,
        series=series,
    )


def approximation_distance(
    p: ModelParams,
    a: AnalysisParams,
    Ks: Sequence[int],
    replicas: int,
    base_seed: int,
    horizon: float = 20.0,
    dt: float = 0.1,
    threshold: float = 0.05,
    workers: int = 1,
) -> ApproximationReport:
    """Sup-norm distance between rescaled stochastic paths and the ODE.

    Every replica and the ODE start from the rounded densities
    (n̄_a - δ, δ, 0) at each K.
    """
    validate_params(p)
    if not 0 < a.delta_fix < p.nbar_a:
        raise ParameterError("δ must be in (0, n̄_a)")
    records: list[ApproximationRecord] = []
    for index, K in enumerate(Ks):
        pK = p.model_copy(update={"K": K})
        init = PopCount.from_density(invasion_start(pK, a), K)
        ode = integrate(pK, init.density(K), horizon)
        results = run_replicas(
            pK, init, StopSpec(t_max=horizon, detect_loss=False), base_seed, replicas,
            mode=RecordMode.SAMPLED, keep_trajectories=True, workers=workers,
            stream_key=(index,), dt=dt,
        )
        distances = []
        for trajectory, record in results:
            times, stoch = density_grid(trajectory, record.final_state, K, horizon, dt)
            distances.append(float(np.max(np.abs(stoch - ode(times)))))
        q50, q90 = quantiles(distances, [0.5, 0.9])
        below = sum(d < threshold for d in distances) / len(distances)
        logger.info(f"K={K}: median distance {q50:.4f}, {below:.0%} below {threshold}")
        records.append(
            ApproximationRecord(
                K=K,
                replicas=replicas,
                median_distance=q50,
                q90_distance=q90,
                fraction_below=below,
                distances=distances,
            )
        )

    ordered = sorted(records, key=lambda r: r.K)
    decreasing = None
    if len(ordered) >= 2:
        medians = [r.median_distance for r in ordered]
        decreasing = all(b < a_ for a_, b in zip(medians, medians[1:]))
    return ApproximationReport(
        params=p,
        analysis=a,
        base_seed=base_seed,
        horizon=horizon,
        threshold=threshold,
        records=records,
        median_decreasing=decreasing,
    )
