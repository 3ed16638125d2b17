"""Small statistics helpers shared by the experiments."""

import math
from typing import Sequence

import numpy as np
from scipy import stats

from ..exceptions import ExperimentError
from .schemas import ScalingFit


def binomial_std_error(successes: int, trials: int) -> float:
    """sqrt(e(1-e)/n); zero for an empty or degenerate sample."""
    if trials <= 0:
        return 0.0
    estimate = successes / trials
    return math.sqrt(estimate * (1 - estimate) / trials)


def quantiles(values: Sequence[float], qs: Sequence[float]) -> list[float]:
    return [float(v) for v in np.quantile(np.asarray(values, dtype=float), qs)]


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> ScalingFit:
    """Ordinary least squares y = intercept + slope * x."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 2:
        raise ExperimentError("a fit needs at least two points")
    result = stats.linregress(xs, ys)
    ci_low = ci_high = None
    if xs.size > 2:
        half_width = stats.t.ppf(0.975, xs.size - 2) * result.stderr
        ci_low = float(result.slope - half_width)
        ci_high = float(result.slope + half_width)
    return ScalingFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        slope_ci_low=ci_low,
        slope_ci_high=ci_high,
        r_squared=float(result.rvalue ** 2),
        points=int(xs.size),
    )


def loglog_fit(xs: Sequence[float], ys: Sequence[float]) -> ScalingFit:
    """Fit log y = intercept + slope * log x."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ExperimentError("log-log fit needs positive values")
    return linear_fit(np.log(xs), np.log(ys))
