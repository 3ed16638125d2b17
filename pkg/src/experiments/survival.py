"""Survival time of the recessive allele after the mutant has fixed."""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..exceptions import ParameterError
from ..models import AnalysisParams, ModelParams
from ..rates import validate_analysis, validate_params
from ..ssa import RecordMode, StopSpec, StoppingRecord, run_replicas
from .fixation import resident_with_mutant
from .schemas import SurvivalRecord, SurvivalSample, SurvivalScalingReport
from .statistics import binomial_std_error, linear_fit, loglog_fit, quantiles

logger = logging.getLogger(__name__)

MIN_RELIABLE = 10


def survival_stop(a: AnalysisParams, levels: list[float]) -> StopSpec:
    return StopSpec(
        delta_fix=a.delta_fix,
        stop_on_loss=True,
        hit_levels=levels,
        stop_on_hits=True,
    )


def survival_sample(record: StoppingRecord, K: int, eps: float, floor: Optional[float]) -> SurvivalSample:
    """Survival time of one fixing replica.

    Flagged when the aa genotype died out before the floor hit, or when
    the run ended without a floor hit (the time is then truncated at the
    end of the run).
    """
    tau_eps = record.tau_hit[eps]
    tau_floor = record.tau_hit.get(floor) if floor is not None else None
    end = tau_floor if tau_floor is not None else record.t_end
    flagged = tau_floor is None or (
        record.tau_aa_extinct is not None and record.tau_aa_extinct < tau_floor
    )
    return SurvivalSample(
        K=K,
        replica=record.replica,
        tau_eps=tau_eps,
        tau_floor=tau_floor,
        tau_sur=max(end - tau_eps, 0.0),
        flagged=flagged,
    )


def _conditioned_runs(
    p: ModelParams,
    a: AnalysisParams,
    stop: StopSpec,
    target: int,
    max_attempts: int,
    base_seed: int,
    stream_key: tuple[int, ...],
    workers: int,
) -> tuple[list[StoppingRecord], int, int]:
    """Run replicas until ``target`` of them fix or attempts run out.

    Returns:
        (first ``target`` conditioned records, attempts, replicas that fixed)
    """
    init = resident_with_mutant(p)
    fixing: list[StoppingRecord] = []
    attempts = 0
    fixed_total = 0
    while len(fixing) < target and attempts < max_attempts:
        needed = target - len(fixing)
        batch = min(math.ceil(1.2 * needed * p.f / p.delta) + 1, max_attempts - attempts)
        results = run_replicas(
            p, init, stop, base_seed, batch,
            mode=RecordMode.STOPS, workers=workers, stream_key=stream_key, start=attempts,
        )
        attempts += batch
        fixed_total += sum(record.fixed for _, record in results)
        fixing.extend(
            record for _, record in results
            if record.fixed and a.eps in record.tau_hit and record.tau_hit[a.eps] is not None
        )
        logger.info(f"K={p.K}: {len(fixing)} fixing replicas after {attempts} attempts")
    return fixing[:target], attempts, fixed_total


def survival_scaling(
    p: ModelParams,
    a: AnalysisParams,
    Ks: Sequence[int],
    replicas_per_K: int,
    base_seed: int,
    workers: int = 1,
    max_attempts: Optional[int] = None,
) -> SurvivalScalingReport:
    """Measure tau_eps^hit and tau_sur over a grid of carrying capacities.

    Args:
        p: Model parameters (K is replaced by each grid value)
        a: Analysis parameters
        Ks: Carrying capacities
        replicas_per_K: Conditioned replicas wanted per K
        base_seed: Base seed
        workers: Process count
        max_attempts: Cap on attempts per K

    Returns:
        SurvivalScalingReport
    """
    validate_params(p)
    validate_analysis(a, p)
    if p.mu != 0:
        raise ParameterError("survival runs need mu = 0")
    if replicas_per_K < 1:
        raise ParameterError("replicas_per_K must be >= 1")
    if max_attempts is None:
        max_attempts = math.ceil(4 * replicas_per_K * p.f / p.delta)

    records: list[SurvivalRecord] = []
    samples: list[SurvivalSample] = []
    for index, K in enumerate(Ks):
        if K < 1:
            raise ParameterError("K must be >= 1")
        pK = p.model_copy(update={"K": K})
        floor = a.floor_level(K)
        in_regime = floor < a.eps
        if not in_regime:
            logger.warning(f"K={K}: floor level {floor:.4f} is not below ε={a.eps}")
        levels = [a.eps, floor] if in_regime else [a.eps]

        fixing, attempts, fixed_total = _conditioned_runs(
            pK, a, survival_stop(a, levels), replicas_per_K, max_attempts,
            base_seed, (index,), workers,
        )
        K_samples = [
            survival_sample(record, K, a.eps, floor if in_regime else None)
            for record in fixing
        ]
        samples.extend(K_samples)
        records.append(_aggregate(K, attempts, fixed_total, floor, in_regime, K_samples))

    reliable = sorted(
        (r for r in records if r.reliable and r.in_regime and r.median_tau_sur),
        key=lambda r: r.K,
    )
    slope_fit = None
    median_increasing = None
    if len(reliable) >= 3:
        slope_fit = loglog_fit([r.K for r in reliable], [r.median_tau_sur for r in reliable])
    if len(reliable) >= 2:
        medians = [r.median_tau_sur for r in reliable]
        median_increasing = all(b > a_ for a_, b in zip(medians, medians[1:]))

    invasion = sorted((r for r in records if r.reliable), key=lambda r: r.K)
    invasion_fit = None
    if len(invasion) >= 3:
        invasion_fit = linear_fit(
            [math.log(r.K) for r in invasion], [r.median_tau_eps for r in invasion]
        )

    return SurvivalScalingReport(
        params=p,
        analysis=a,
        base_seed=base_seed,
        replicas_per_K=replicas_per_K,
        records=records,
        samples=samples,
        target_slope=0.25 - a.alpha,
        slope_fit=slope_fit,
        invasion_fit=invasion_fit,
        median_increasing=median_increasing,
    )


def _aggregate(
    K: int,
    attempts: int,
    fixed_total: int,
    floor: float,
    in_regime: bool,
    samples: list[SurvivalSample],
) -> SurvivalRecord:
    conditioned = len(samples)
    reliable = conditioned >= MIN_RELIABLE
    if not reliable:
        logger.warning(f"K={K}: only {conditioned} conditioned replicas, marked unreliable")
    record = SurvivalRecord(
        K=K,
        attempts=attempts,
        conditioned=conditioned,
        fixation_fraction=fixed_total / attempts if attempts else 0.0,
        fixation_std_error=binomial_std_error(fixed_total, attempts),
        floor_level=floor,
        in_regime=in_regime,
        reliable=reliable,
    )
    if not samples:
        return record
    tau_eps = [s.tau_eps for s in samples]
    update = {
        "median_tau_eps": float(np.median(tau_eps)),
        "flag_fraction": sum(s.flagged for s in samples) / len(samples),
    }
    if in_regime:
        q25, median, q75 = quantiles([s.tau_sur for s in samples], [0.25, 0.5, 0.75])
        update.update(tau_sur_q25=q25, median_tau_sur=median, tau_sur_q75=q75)
    return record.model_copy(update=update)
