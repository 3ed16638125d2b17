"""Linear birth-death branching processes."""

import logging
import math

import numpy as np
from pydantic import BaseModel, Field

from ..exceptions import CriticalBranchingError
from ..models import ModelParams
from ..ssa.engine import RandomStream

logger = logging.getLogger(__name__)


class BranchingParams(BaseModel):
    """Per-individual birth rate b, death rate d and initial size n0."""

    b: float = Field(ge=0)
    d: float = Field(ge=0)
    n0: int = Field(default=1, ge=1)


def branching_survival(bp: BranchingParams) -> float:
    """Probability that the process never dies out."""
    if bp.b <= bp.d:
        return 0.0
    return max(0.0, 1.0 - (bp.d / bp.b) ** bp.n0)


def extinction_cdf(bp: BranchingParams, t: float | np.ndarray) -> float | np.ndarray:
    """P(T_0 <= t) for the extinction time T_0.

    Raises:
        CriticalBranchingError: If b == d
    """
    b, d = bp.b, bp.d
    if b == d:
        raise CriticalBranchingError("critical case not covered by the formula")
    t = np.asarray(t, dtype=float)
    if b > d:
        decay = np.exp(-(b - d) * t)
        ratio = d * (1.0 - decay) / (b - d * decay)
    else:
        # Same ratio scaled by e^{(b-d)t}, which stays in [0, 1]
        shrink = np.exp((b - d) * t)
        ratio = d * (shrink - 1.0) / (b * shrink - d)
    value = ratio ** bp.n0
    return float(value) if np.ndim(value) == 0 else value


def invasion_branching(p: ModelParams) -> BranchingParams:
    """Branching approximation of a single mutant allele in the resident aa population.

    Its survival probability is delta / f.
    """
    return BranchingParams(b=p.f, d=p.D + p.c * p.nbar_a, n0=1)


def _extinct_by(bp: BranchingParams, t: float, stream: RandomStream) -> bool:
    n = bp.n0
    clock = 0.0
    rate = bp.b + bp.d
    if rate == 0:
        return False
    up = bp.b / rate
    while n > 0:
        clock += stream.exponential() / (rate * n)
        if clock > t:
            return False
        n += 1 if stream.uniform() < up else -1
    return True


def simulate_extinction(
    bp: BranchingParams, t: float, replicas: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate of P(T_0 <= t) with its binomial standard error."""
    extinct = 0
    stream = RandomStream.from_seed(seed)
    for _ in range(replicas):
        extinct += _extinct_by(bp, t, stream)
    estimate = extinct / replicas
    std_error = math.sqrt(estimate * (1 - estimate) / replicas)
    logger.debug(f"Extinction by t={t}: {extinct}/{replicas}")
    return estimate, std_error
