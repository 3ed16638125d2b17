"""Trajectory recording for the exact simulator."""

import bisect
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd

from ..models import PopCount

TRAJECTORY_COLUMNS = ["t", "N_aa", "N_aA", "N_AA"]


class RecordMode(str, Enum):
    """How much of the path is kept."""
    EVENTS = "events"
    SAMPLED = "sampled"
    STOPS = "stops"


@dataclass
class Trajectory:
    """Time series of genotype counts.

    In ``sampled`` mode the state at each grid time is the state left by
    the most recent event (piecewise-constant path).
    """

    mode: RecordMode
    dt: float = 1.0
    t: list[float] = field(default_factory=list)
    n_aa: list[int] = field(default_factory=list)
    n_aA: list[int] = field(default_factory=list)
    n_AA: list[int] = field(default_factory=list)

    def append(self, t: float, n_aa: int, n_aA: int, n_AA: int) -> None:
        if self.t and t <= self.t[-1]:
            return
        self.t.append(t)
        self.n_aa.append(n_aa)
        self.n_aA.append(n_aA)
        self.n_AA.append(n_AA)

    def extend(self, t: np.ndarray, counts: np.ndarray) -> None:
        """Append rows in time order; rows not after the last time are skipped."""
        if self.t:
            keep = t > self.t[-1]
            t, counts = t[keep], counts[keep]
        self.t.extend(t.tolist())
        self.n_aa.extend(counts[:, 0].tolist())
        self.n_aA.extend(counts[:, 1].tolist())
        self.n_AA.extend(counts[:, 2].tolist())

    def __len__(self) -> int:
        return len(self.t)

    def state_at(self, t: float) -> PopCount:
        """Most recent recorded state at or before ``t``."""
        i = max(bisect.bisect_right(self.t, t) - 1, 0)
        return PopCount(n_aa=self.n_aa[i], n_aA=self.n_aA[i], n_AA=self.n_AA[i])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t": self.t,
                "N_aa": self.n_aa,
                "N_aA": self.n_aA,
                "N_AA": self.n_AA,
            },
            columns=TRAJECTORY_COLUMNS,
        )

    def density_frame(self, K: int) -> pd.DataFrame:
        """Counts divided by K, with ODE-style column names."""
        frame = self.to_frame()
        return pd.DataFrame(
            {
                "t": frame["t"],
                "x_aa": frame["N_aa"] / K,
                "y_aA": frame["N_aA"] / K,
                "z_AA": frame["N_AA"] / K,
            }
        )


def trajectory_csv(trajectory: Trajectory) -> str:
    """CSV text with header ``t,N_aa,N_aA,N_AA``."""
    return trajectory.to_frame().to_csv(index=False, lineterminator="\n")
