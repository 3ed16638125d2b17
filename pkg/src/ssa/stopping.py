"""Stopping conditions and the record of detected stopping times."""

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from ..exceptions import ParameterError
from ..models import PopCount


class StopReason(str, Enum):
    """Why a simulation terminated."""
    FIXATION = "fixation"
    MUTANT_LOST = "mutant-lost"
    HITS_COMPLETE = "hits-complete"
    MUTATION = "mutation"
    EXTINCT = "extinct"
    TIME_CAP = "time-cap"


class StopSpec(BaseModel):
    """Which stopping times to detect and which of them terminate the run.

    Hit levels are armed once the mutant density reaches ``delta_fix``;
    without ``delta_fix`` they are armed from the start.
    """

    delta_fix: Optional[float] = None
    stop_on_fixation: bool = False
    detect_loss: bool = True
    stop_on_loss: bool = False
    hit_levels: list[float] = Field(default_factory=list)
    stop_on_hits: bool = False
    stop_on_mutation: bool = False
    t_max: Optional[float] = None
    stop_on_extinction: bool = True

    @model_validator(mode="after")
    def _check(self) -> "StopSpec":
        if self.delta_fix is not None and self.delta_fix <= 0:
            raise ParameterError("fixation threshold must be > 0")
        if any(level < 0 for level in self.hit_levels):
            raise ParameterError("hit levels must be >= 0")
        if self.t_max is not None and self.t_max <= 0:
            raise ParameterError("t_max must be > 0")
        if self.stop_on_fixation and self.delta_fix is None:
            raise ParameterError("stop_on_fixation needs delta_fix")
        terminating = (
            self.stop_on_fixation
            or (self.stop_on_loss and self.detect_loss)
            or (self.stop_on_hits and bool(self.hit_levels))
            or self.stop_on_mutation
            or self.t_max is not None
            or self.stop_on_extinction
        )
        if not terminating:
            raise ParameterError("no terminating condition enabled")
        return self


class StoppingRecord(BaseModel):
    """Stopping times detected during one simulation run."""

    tau_delta_mut: Optional[float] = None
    tau_0_mut: Optional[float] = None
    tau_hit: dict[float, Optional[float]] = Field(default_factory=dict)
    tau_1: Optional[float] = None
    tau_aa_extinct: Optional[float] = None
    hit_states: dict[float, PopCount] = Field(default_factory=dict)
    final_state: Optional[PopCount] = None
    events: int = 0
    t_end: float
    reason: StopReason
    seed: int
    replica: int = 0

    @property
    def fixed(self) -> bool:
        """Mutant reached the fixation threshold before dying out."""
        return self.tau_delta_mut is not None and (
            self.tau_0_mut is None or self.tau_delta_mut < self.tau_0_mut
        )

    def tau_sur(self, eps: float, floor: float) -> Optional[float]:
        """Time to descend from level ``eps`` to level ``floor``."""
        start = self.tau_hit.get(eps)
        end = self.tau_hit.get(floor)
        if start is None or end is None:
            return None
        return end - start


class StopTracker:
    """Incremental detection of stopping times along a trajectory."""

    def __init__(self, stop: StopSpec, K: int):
        self.stop = stop
        self.fix_count = None
        if stop.delta_fix is not None:
            self.fix_count = max(1, math.ceil(stop.delta_fix * K - 1e-9))
        self.hit_counts = {
            level: math.floor(level * K + 1e-9) for level in stop.hit_levels
        }
        self.pending = dict(self.hit_counts)
        self.armed = stop.delta_fix is None

        self.tau_delta_mut: Optional[float] = None
        self.tau_0_mut: Optional[float] = None
        self.tau_1: Optional[float] = None
        self.tau_aa_extinct: Optional[float] = None
        self.tau_hit: dict[float, Optional[float]] = {
            level: None for level in stop.hit_levels
        }
        self.hit_states: dict[float, PopCount] = {}
        # True when the last call recorded a new stopping time
        self.fresh = False

    def observe(self, t: float, n_aa: int, n_aA: int, n_AA: int) -> Optional[StopReason]:
        """Update stopping times for the state holding from time ``t`` on."""
        self.fresh = False
        mutant = 2 * n_AA + n_aA
        fixed_now = False

        if (
            self.fix_count is not None
            and self.tau_delta_mut is None
            and mutant >= self.fix_count
        ):
            self.tau_delta_mut = t
            self.armed = True
            self.fresh = True
            fixed_now = True

        if self.stop.detect_loss and self.tau_0_mut is None and mutant == 0:
            self.tau_0_mut = t
            self.fresh = True
            if self.stop.stop_on_loss:
                return StopReason.MUTANT_LOST

        if self.armed:
            if n_aa == 0 and self.tau_aa_extinct is None and self.tau_delta_mut is not None:
                self.tau_aa_extinct = t
            if self.pending:
                for level, count in list(self.pending.items()):
                    if n_aA <= count:
                        self.tau_hit[level] = t
                        self.hit_states[level] = PopCount(n_aa=n_aa, n_aA=n_aA, n_AA=n_AA)
                        del self.pending[level]
                        self.fresh = True
                if self.stop.stop_on_hits and not self.pending:
                    return StopReason.HITS_COMPLETE

        if fixed_now and self.stop.stop_on_fixation:
            return StopReason.FIXATION
        return None

    def watch(self) -> tuple[int, bool, int, bool, bool]:
        """Thresholds whose crossing needs a call to ``observe`` or ``mutation``.

        Returns:
            (fixation count or -1, watch loss, largest pending hit count or -1,
            watch aa extinction, watch mutation)
        """
        fix_count = -1
        if self.fix_count is not None and self.tau_delta_mut is None:
            fix_count = self.fix_count
        watch_loss = self.stop.detect_loss and self.tau_0_mut is None
        hit_count = max(self.pending.values()) if self.armed and self.pending else -1
        watch_aa = self.armed and self.tau_delta_mut is not None and self.tau_aa_extinct is None
        return fix_count, watch_loss, hit_count, watch_aa, self.tau_1 is None

    def mutation(self, t: float) -> Optional[StopReason]:
        """Register a mutant birth at time ``t``."""
        if self.tau_1 is None:
            self.tau_1 = t
            self.fresh = True
            if self.stop.stop_on_mutation:
                return StopReason.MUTATION
        return None

    def to_record(
        self,
        t_end: float,
        reason: StopReason,
        final_state: PopCount,
        events: int,
        seed: int,
        replica: int,
    ) -> StoppingRecord:
        return StoppingRecord(
            tau_delta_mut=self.tau_delta_mut,
            tau_0_mut=self.tau_0_mut,
            tau_hit=dict(self.tau_hit),
            tau_1=self.tau_1,
            tau_aa_extinct=self.tau_aa_extinct,
            hit_states=dict(self.hit_states),
            final_state=final_state,
            events=events,
            t_end=t_end,
            reason=reason,
            seed=seed,
            replica=replica,
        )
