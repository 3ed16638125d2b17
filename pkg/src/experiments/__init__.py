"""Monte Carlo and numerical checks of the model's predictions."""

from .decay import approximation_distance, decay_comparison, deterministic_decay
from .fixation import estimate_fixation
from .ladder import ladder, ladder_crossings
from .survival import survival_scaling
from .window import mutation_timing, mutation_window

__all__ = [
    "approximation_distance",
    "decay_comparison",
    "deterministic_decay",
    "estimate_fixation",
    "ladder",
    "ladder_crossings",
    "mutation_timing",
    "mutation_window",
    "survival_scaling",
]
