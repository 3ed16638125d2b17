"""Hitting probabilities of finite one-dimensional birth-death chains."""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from ..exceptions import ChainSizeError, ParameterError

logger = logging.getLogger(__name__)

MAX_ORACLE_SIZE = 10_000


@dataclass(frozen=True)
class ChainSpec:
    """Nearest-neighbour chain on {lo, ..., hi} with absorbing ends.

    ``up_prob(k)`` is the probability of a +1 step from k. With
    ``reflect_at_lo`` the chain is pushed from lo to lo+1, so the value
    at lo is the probability that an excursion from lo reaches hi before
    coming back.
    """

    lo: int
    hi: int
    up_prob: Callable[[int], float]
    reflect_at_lo: bool = False

    @classmethod
    def symmetric(cls, lo: int, hi: int, reflect_at_lo: bool = False) -> "ChainSpec":
        return cls(lo, hi, lambda k: 0.5, reflect_at_lo)

    @classmethod
    def drifted(cls, lo: int, hi: int, c0: float, K: int, reflect_at_lo: bool = False) -> "ChainSpec":
        """Chain with up-probability 1/2 - c0*k/K (downward drift)."""
        return cls(lo, hi, lambda k: 0.5 - c0 * k / K, reflect_at_lo)

    def interior_up_probs(self) -> np.ndarray:
        """Validated up-probabilities for k = lo+1 .. hi-1."""
        if self.hi <= self.lo:
            raise ParameterError("chain needs hi > lo")
        probs = np.array([self.up_prob(k) for k in range(self.lo + 1, self.hi)], dtype=float)
        if probs.size and (np.any(probs <= 0) or np.any(probs >= 1)):
            raise ParameterError("up_prob must lie in (0, 1) on interior states")
        return probs


def _check_state(spec: ChainSpec, z: int) -> None:
    if not spec.lo <= z <= spec.hi:
        raise ParameterError(f"state {z} outside [{spec.lo}, {spec.hi}]")


def hitting_probabilities(spec: ChainSpec) -> np.ndarray:
    """Equilibrium potential h(lo), ..., h(hi) from log-space product sums."""
    probs = spec.interior_up_probs()
    # log of prod_{k=lo+1}^{n-1} q(k)/p(k) for n = lo+1 .. hi
    log_ratios = np.log1p(-probs) - np.log(probs)
    log_terms = np.concatenate([[0.0], np.cumsum(log_ratios)])
    partial = np.logaddexp.accumulate(log_terms)
    h = np.empty(spec.hi - spec.lo + 1)
    h[0] = 0.0
    h[1:] = np.exp(partial - logsumexp(log_terms))
    h[-1] = 1.0
    if spec.reflect_at_lo:
        h[0] = h[1]
    return h


def hitting_probability(spec: ChainSpec, z: int) -> float:
    """Probability of reaching hi before lo when started at z."""
    _check_state(spec, z)
    return float(hitting_probabilities(spec)[z - spec.lo])


def oracle_potential(spec: ChainSpec) -> np.ndarray:
    """h(lo), ..., h(hi) by eliminating the harmonic equations directly.

    Row k reads h(k) = p(k) h(k+1) + q(k) h(k-1). Forward elimination
    writes h(k) = a(k) h(k+1) and carries b(k) = 1 - a(k) next to a(k), so
    the pivot 1 - q(k) a(k-1) = p(k) + q(k) b(k-1) is a sum of positive
    terms, and back substitution from h(hi) = 1 is a chain of products.

    Raises:
        ChainSizeError: If hi - lo exceeds MAX_ORACLE_SIZE
    """
    if spec.hi - spec.lo > MAX_ORACLE_SIZE:
        raise ChainSizeError(
            f"chain of size {spec.hi - spec.lo} exceeds oracle limit {MAX_ORACLE_SIZE}"
        )
    probs = spec.interior_up_probs()
    m = probs.size
    ratio = np.zeros(m)
    rest = 1.0
    for i, p_up in enumerate(probs):
        q_down = 1.0 - p_up
        pivot = p_up + q_down * rest
        ratio[i] = p_up / pivot
        rest = q_down * rest / pivot

    h = np.zeros(m + 2)
    h[-1] = 1.0
    for i in range(m - 1, -1, -1):
        h[i + 1] = ratio[i] * h[i + 2]
    if spec.reflect_at_lo:
        h[0] = h[1]
    return h


def hitting_oracle(spec: ChainSpec, z: int) -> float:
    """Same probability as hitting_probability, from oracle_potential.

    Raises:
        ChainSizeError: If hi - lo exceeds MAX_ORACLE_SIZE
    """
    _check_state(spec, z)
    return float(oracle_potential(spec)[z - spec.lo])


def expected_returns(spec: ChainSpec) -> float:
    """Mean number of returns to lo before hi, for a chain reflected at lo."""
    escape = hitting_probabilities(spec)[1]
    return (1.0 - escape) / escape
