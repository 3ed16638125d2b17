"""Pydantic reports produced by the experiments.

Every report embeds the parameters and the base seed it was run with.
"""

from typing import Optional

import pandas as pd
from pydantic import BaseModel, Field

from ..models import AnalysisParams, Dominance, ModelParams, PopDensity


class ScalingFit(BaseModel):
    """Least-squares line with a 95% confidence interval on the slope."""

    slope: float
    intercept: float
    slope_ci_low: Optional[float] = None
    slope_ci_high: Optional[float] = None
    r_squared: float
    points: int


class FixationEstimate(BaseModel):
    """Monte Carlo estimate of the mutant fixation probability."""

    params: ModelParams
    analysis: AnalysisParams
    base_seed: int
    replicas: int
    successes: int
    estimate: float
    std_error: float
    target: float
    invasion_survival: float

    @property
    def deviation(self) -> float:
        return abs(self.estimate - self.target)


class SurvivalSample(BaseModel):
    """One conditioned (fixing) replica of a survival run."""

    K: int
    replica: int
    tau_eps: float
    tau_floor: Optional[float] = None
    tau_sur: float
    flagged: bool


class SurvivalRecord(BaseModel):
    """Aggregates for one carrying capacity."""

    K: int
    attempts: int
    conditioned: int
    fixation_fraction: float
    fixation_std_error: float
    floor_level: float
    in_regime: bool
    reliable: bool
    median_tau_sur: Optional[float] = None
    tau_sur_q25: Optional[float] = None
    tau_sur_q75: Optional[float] = None
    median_tau_eps: Optional[float] = None
    flag_fraction: Optional[float] = None

    @property
    def iqr(self) -> Optional[float]:
        if self.tau_sur_q25 is None or self.tau_sur_q75 is None:
            return None
        return self.tau_sur_q75 - self.tau_sur_q25


class SurvivalScalingReport(BaseModel):
    """Survival time of the recessive allele across carrying capacities."""

    params: ModelParams
    analysis: AnalysisParams
    base_seed: int
    replicas_per_K: int
    records: list[SurvivalRecord]
    samples: list[SurvivalSample] = Field(default_factory=list)
    target_slope: float
    slope_fit: Optional[ScalingFit] = None
    invasion_fit: Optional[ScalingFit] = None
    median_increasing: Optional[bool] = None

    def samples_frame(self) -> pd.DataFrame:
        return pd.DataFrame([s.model_dump() for s in self.samples], columns=list(SurvivalSample.model_fields))


class LadderRung(BaseModel):
    """One level of the geometric ladder x^i * eps."""

    index: int
    level: float
    reentry_level: float
    time_lower: float
    time_upper: float
    aa_envelope: float
    sigma_floor: float


class LadderSchedule(BaseModel):
    """Predicted rung-by-rung descent of the heterozygote density."""

    params: ModelParams
    analysis: AnalysisParams
    K: int
    x: float
    i_max: int
    floor_level: float
    in_regime: bool
    C_l: float
    C_u: float
    rungs: list[LadderRung]
    total_lower: Optional[float] = None
    total_upper: Optional[float] = None
    deterministic_time: Optional[float] = None

    def rungs_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.rungs], columns=list(LadderRung.model_fields))


class LadderCrossing(BaseModel):
    """Observed passage from one rung level to the next."""

    index: int
    level: float
    next_level: float
    hit_time: float
    elapsed: float
    implied_constant: float


class LadderCrossingReport(BaseModel):
    """Rung crossing times of one fixing trajectory."""

    params: ModelParams
    analysis: AnalysisParams
    K: int
    seed: int
    replica: int
    crossings: list[LadderCrossing]
    total_time: float
    median_implied_constant: Optional[float] = None


class DecaySample(BaseModel):
    """Aligned heterozygote densities at one sample time."""

    t: float
    y_stochastic: float
    y_ode: float
    lower: float
    upper: float


class DecayComparisonReport(BaseModel):
    """Stochastic and deterministic heterozygote decay from a matched state."""

    params: ModelParams
    analysis: AnalysisParams
    K: int
    seed: int
    replica: int
    dt: float
    margin: float
    tau_eps: float
    matched_state: PopDensity
    stochastic_within_fraction: float
    ode_within_fraction: float
    sup_distance: float
    series: list[DecaySample]

    def series_frame(self) -> pd.DataFrame:
        return pd.DataFrame([s.model_dump() for s in self.series], columns=list(DecaySample.model_fields))


class DeterministicDecayReport(BaseModel):
    """Bracket and tail-shape checks on the integrated heterozygote density."""

    params: ModelParams
    analysis: AnalysisParams
    dominance: Dominance
    restart_time: float
    restart_state: PopDensity
    end_time: float
    samples: int
    within_fraction: float
    first_violation: Optional[float] = None
    tail_slope: Optional[float] = None
    loglog_r_squared: Optional[float] = None
    exponential_r_squared: Optional[float] = None


class ApproximationRecord(BaseModel):
    """Sup-norm distances between stochastic and ODE paths at one K."""

    K: int
    replicas: int
    median_distance: float
    q90_distance: float
    fraction_below: float
    distances: list[float]


class ApproximationReport(BaseModel):
    """Large-population approximation across carrying capacities."""

    params: ModelParams
    analysis: AnalysisParams
    base_seed: int
    horizon: float
    threshold: float
    records: list[ApproximationRecord]
    median_decreasing: Optional[bool] = None


class MutationWindowReport(BaseModel):
    """Position of the mutation rate relative to the admissible window."""

    params: ModelParams
    analysis: AnalysisParams
    K: int
    mu: float
    threshold: float
    r1: Optional[float] = None
    r2: Optional[float] = None
    left_ok: Optional[bool] = None
    right_ok: Optional[bool] = None
    passed: Optional[bool] = None
    first_mutation_time: Optional[float] = None
    note: str = ""


class MutationTimingReport(BaseModel):
    """Where the first mutation falls relative to the heterozygote decay."""

    params: ModelParams
    analysis: AnalysisParams
    base_seed: int
    replicas: int
    conditioned: int
    after_eps_fraction: float
    before_zero_fraction: float
    window_fraction: float
    median_delay_after_fixation: Optional[float] = None
    predicted_first_mutation_time: float
