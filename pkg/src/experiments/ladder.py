"""Geometric ladder of heterozygote levels and its predicted descent times."""

import logging
import math

import numpy as np

from ..exceptions import ExperimentError, ParameterError
from ..models import AnalysisParams, ModelParams
from ..rates import derived, validate_analysis, validate_params
from ..ssa import StopReason, StopSpec, simulate
from .fixation import resident_with_mutant
from .schemas import LadderCrossing, LadderCrossingReport, LadderRung, LadderSchedule

logger = logging.getLogger(__name__)


def ladder(
    p: ModelParams, a: AnalysisParams, K: int, C_l: float = 1.0, C_u: float = 1.0
) -> LadderSchedule:
    """Levels x^i * eps down to the floor, with per-rung and total time brackets.

    Rung i is predicted to take between C_l/(x^i eps) and C_u/(x^i eps).
    When the floor is not below eps the ladder is empty and out of regime.

    Args:
        p: Model parameters
        a: Analysis parameters
        K: Carrying capacity
        C_l: Lower time constant
        C_u: Upper time constant

    Returns:
        LadderSchedule
    """
    validate_params(p)
    validate_analysis(a, p)
    if not 0 < C_l <= C_u:
        raise ParameterError("need 0 < C_l <= C_u")
    q = derived(p, a)
    x, eps = q.x_ladder, a.eps
    floor = a.floor_level(K)
    i_max = math.floor(math.log(floor / eps) / math.log(x))
    in_regime = i_max >= 0

    rungs = []
    for i in range(i_max + 1):
        level = x ** i * eps
        square = x ** (2 * i) * eps ** 2
        envelope = q.gamma_delta * square
        rungs.append(
            LadderRung(
                index=i,
                level=level,
                reentry_level=level + square,
                time_lower=C_l / level,
                time_upper=C_u / level,
                aa_envelope=envelope,
                sigma_floor=p.nbar_A - (p.delta + a.theta) / (p.c * p.nbar_A) * envelope,
            )
        )

    total_lower = total_upper = deterministic_time = None
    if in_regime:
        span = 1 / floor - 1 / eps
        total_lower = C_l * x / (1 - x) * span
        total_upper = C_u * x / (1 - x) * span
        deterministic_time = span
    else:
        logger.warning(f"K={K}: floor {floor:.4f} is not below ε={eps}, ladder is empty")

    return LadderSchedule(
        params=p,
        analysis=a,
        K=K,
        x=x,
        i_max=i_max,
        floor_level=floor,
        in_regime=in_regime,
        C_l=C_l,
        C_u=C_u,
        rungs=rungs,
        total_lower=total_lower,
        total_upper=total_upper,
        deterministic_time=deterministic_time,
    )


def ladder_crossings(
    p: ModelParams,
    a: AnalysisParams,
    K: int,
    seed: int,
    max_attempts: int = 1000,
) -> LadderCrossingReport:
    """Observed rung-to-rung passage times along one fixing trajectory.

    The implied constant of rung i is its passage time times x^i * eps.
    """
    schedule = ladder(p, a, K)
    if not schedule.in_regime:
        raise ExperimentError(f"ladder is empty at K={K}")
    pK = p.model_copy(update={"K": K})
    levels = [rung.level for rung in schedule.rungs] + [schedule.floor_level]
    stop = StopSpec(
        delta_fix=a.delta_fix,
        stop_on_loss=True,
        hit_levels=levels,
        stop_on_hits=True,
    )
    init = resident_with_mutant(pK)
    for replica in range(max_attempts):
        _, record = simulate(pK, init, stop, seed, replica=replica)
        if record.reason == StopReason.HITS_COMPLETE and record.fixed:
            break
    else:
        raise ExperimentError(f"no fixing replica within {max_attempts} attempts")

    crossings = []
    for i, rung in enumerate(schedule.rungs):
        start = record.tau_hit[levels[i]]
        end = record.tau_hit[levels[i + 1]]
        crossings.append(
            LadderCrossing(
                index=i,
                level=rung.level,
                next_level=levels[i + 1],
                hit_time=start,
                elapsed=end - start,
                implied_constant=(end - start) * rung.level,
            )
        )
    constants = [c.implied_constant for c in crossings if c.elapsed > 0]
    logger.info(f"Replica {replica}: {len(crossings)} rung crossings at K={K}")
    return LadderCrossingReport(
        params=pK,
        analysis=a,
        K=K,
        seed=seed,
        replica=replica,
        crossings=crossings,
        total_time=record.tau_hit[levels[-1]] - record.tau_hit[levels[0]],
        median_implied_constant=float(np.median(constants)) if constants else None,
    )
