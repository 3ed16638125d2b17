"""First-passage analytics for birth-death chains and branching processes."""

from .branching import (
    BranchingParams,
    branching_survival,
    extinction_cdf,
    invasion_branching,
    simulate_extinction,
)
from .potential import (
    ChainSpec,
    expected_returns,
    hitting_oracle,
    hitting_probabilities,
    hitting_probability,
    oracle_potential,
)

__all__ = [
    "BranchingParams",
    "ChainSpec",
    "branching_survival",
    "expected_returns",
    "extinction_cdf",
    "hitting_oracle",
    "hitting_probabilities",
    "hitting_probability",
    "invasion_branching",
    "oracle_potential",
    "simulate_extinction",
]
