"""Exact stochastic simulation of the Mendelian diploid process."""

from .engine import Event, EventKind, RandomStream, simulate, step
from .recording import RecordMode, Trajectory, trajectory_csv
from .replicas import run_replicas
from .stopping import StopReason, StopSpec, StoppingRecord

__all__ = [
    "Event",
    "EventKind",
    "RandomStream",
    "RecordMode",
    "StopReason",
    "StopSpec",
    "StoppingRecord",
    "Trajectory",
    "run_replicas",
    "simulate",
    "step",
    "trajectory_csv",
]
