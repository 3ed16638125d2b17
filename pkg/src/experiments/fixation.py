"""Fixation probability of a single mutant allele."""

import logging
from typing import Optional

from ..chains.branching import branching_survival, invasion_branching
from ..exceptions import ParameterError
from ..models import AnalysisParams, ModelParams, PopCount
from ..rates import validate_params
from ..ssa import RecordMode, StopReason, StopSpec, run_replicas
from .schemas import FixationEstimate
from .statistics import binomial_std_error

logger = logging.getLogger(__name__)


def resident_with_mutant(p: ModelParams) -> PopCount:
    """Resident aa population at equilibrium plus one heterozygote."""
    return PopCount(n_aa=round(p.nbar_a * p.K), n_aA=1, n_AA=0)


def fixation_stop(a: AnalysisParams, **extra) -> StopSpec:
    """Stop at the first of fixation or loss of the mutant allele."""
    return StopSpec(
        delta_fix=a.delta_fix,
        stop_on_fixation=True,
        stop_on_loss=True,
        **extra,
    )


def estimate_fixation(
    p: ModelParams,
    a: AnalysisParams,
    replicas: int,
    base_seed: int,
    workers: int = 1,
    init: Optional[PopCount] = None,
) -> FixationEstimate:
    """Estimate P(mutant reaches density delta_fix before dying out).

    Args:
        p: Model parameters, delta = 0 allowed (neutral case)
        a: Analysis parameters, only delta_fix is used
        replicas: Number of replicas
        base_seed: Base seed
        workers: Process count
        init: Initial counts, defaults to resident_with_mutant(p)

    Returns:
        FixationEstimate
    """
    validate_params(p, allow_neutral=True)
    if p.mu != 0:
        raise ParameterError("fixation estimate needs mu = 0")
    if replicas < 1:
        raise ParameterError("replicas must be >= 1")
    if not 0 < a.delta_fix < p.nbar_A:
        raise ParameterError("δ must be in (0, n̄_A)")

    init = init or resident_with_mutant(p)
    logger.info(f"Fixation: {replicas} replicas at K={p.K}, δ={a.delta_fix}")
    results = run_replicas(
        p, init, fixation_stop(a), base_seed, replicas, mode=RecordMode.STOPS, workers=workers
    )
    successes = sum(1 for _, record in results if record.reason == StopReason.FIXATION)
    estimate = successes / replicas
    target = p.delta / p.f
    logger.info(f"Fixation: {successes}/{replicas} = {estimate:.4f} (target {target:.4f})")
    return FixationEstimate(
        params=p,
        analysis=a,
        base_seed=base_seed,
        replicas=replicas,
        successes=successes,
        estimate=estimate,
        std_error=binomial_std_error(successes, replicas),
        target=target,
        invasion_survival=branching_survival(invasion_branching(p)),
    )
