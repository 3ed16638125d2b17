"""Mutation-rate window and the timing of the first new mutation."""

import logging
import math

import numpy as np

from ..exceptions import ParameterError
from ..models import AnalysisParams, ModelParams
from ..rates import validate_analysis, validate_params
from ..ssa import StopReason, StopSpec, run_replicas
from .fixation import resident_with_mutant
from .schemas import MutationTimingReport, MutationWindowReport

logger = logging.getLogger(__name__)


def mutation_window(
    p: ModelParams, a: AnalysisParams, K: int, mu: float, threshold: float = 0.1
) -> MutationWindowReport:
    """Ratios placing 1/(K mu) between ln K and K^(1/4 - alpha).

    r1 = ln K * K mu and r2 = (1/(K mu)) / K^(1/4 - alpha); the window
    holds when both are below ``threshold``.
    """
    pK = p.model_copy(update={"K": K, "mu": mu})
    validate_params(pK)
    if mu == 0:
        return MutationWindowReport(
            params=pK, analysis=a, K=K, mu=mu, threshold=threshold,
            note="no mutation; window vacuous",
        )
    waiting = 1 / (K * mu)
    r1 = math.log(K) / waiting
    r2 = waiting / K ** (0.25 - a.alpha)
    left_ok = r1 < threshold
    right_ok = r2 < threshold
    if not left_ok:
        note = "mutations too frequent: 1/(Kμ) not far above ln K"
    elif not right_ok:
        note = "mutations too rare: 1/(Kμ) not far below the survival time"
    else:
        note = "window satisfied"
    return MutationWindowReport(
        params=pK,
        analysis=a,
        K=K,
        mu=mu,
        threshold=threshold,
        r1=r1,
        r2=r2,
        left_ok=left_ok,
        right_ok=right_ok,
        passed=left_ok and right_ok,
        first_mutation_time=1 / (p.f * p.nbar_A * K * mu),
        note=note,
    )


def mutation_timing(
    p: ModelParams,
    a: AnalysisParams,
    replicas: int,
    base_seed: int,
    t_max: float | None = None,
    workers: int = 1,
) -> MutationTimingReport:
    """Simulate until the first mutation and locate it against the hits of eps and 0.

    Runs in which the mutant allele dies out are discarded.
    """
    validate_params(p)
    validate_analysis(a, p)
    if p.mu <= 0:
        raise ParameterError("mutation timing needs mu > 0")
    stop = StopSpec(
        delta_fix=a.delta_fix,
        stop_on_loss=True,
        hit_levels=[a.eps, 0.0],
        stop_on_hits=True,
        stop_on_mutation=True,
        t_max=t_max,
    )
    results = run_replicas(
        p, resident_with_mutant(p), stop, base_seed, replicas, workers=workers
    )
    conditioned = [r for _, r in results if r.reason != StopReason.MUTANT_LOST]
    after_eps = before_zero = both = 0
    delays = []
    for record in conditioned:
        tau_1 = record.tau_1
        if tau_1 is None:
            continue
        tau_eps = record.tau_hit.get(a.eps)
        tau_zero = record.tau_hit.get(0.0)
        is_after = tau_eps is not None and tau_eps < tau_1
        is_before = tau_zero is None or tau_1 < tau_zero
        after_eps += is_after
        before_zero += is_before
        both += is_after and is_before
        if record.tau_delta_mut is not None and tau_1 > record.tau_delta_mut:
            delays.append(tau_1 - record.tau_delta_mut)

    n = len(conditioned)
    logger.info(f"Mutation timing: {both}/{n} conditioned runs inside the window")
    return MutationTimingReport(
        params=p,
        analysis=a,
        base_seed=base_seed,
        replicas=replicas,
        conditioned=n,
        after_eps_fraction=after_eps / n if n else 0.0,
        before_zero_fraction=before_zero / n if n else 0.0,
        window_fraction=both / n if n else 0.0,
        median_delay_after_fixation=float(np.median(delays)) if delays else None,
        predicted_first_mutation_time=1 / (p.f * p.nbar_A * p.K * p.mu),
    )
