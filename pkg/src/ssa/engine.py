"""Exact event-by-event simulation of the three-genotype process."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..exceptions import ExtinctPopulationError, ParameterError
from ..models import ModelParams, PopCount
from ..rates import propensities
from . import kernel
from .recording import RecordMode, Trajectory
from .stopping import StopReason, StopSpec, StoppingRecord, StopTracker

logger = logging.getLogger(__name__)


class EventKind(str, Enum):
    """Kinds of simulated events, births first in selection order."""
    BIRTH_aa = "Birthaa"
    BIRTH_aA = "BirthAa"
    BIRTH_AA = "BirthAA"
    DEATH_aa = "Deathaa"
    DEATH_aA = "DeathAa"
    DEATH_AA = "DeathAA"
    MUTATION_BIRTH = "MutationBirth"


SELECTION_ORDER = (
    EventKind.BIRTH_aa,
    EventKind.BIRTH_aA,
    EventKind.BIRTH_AA,
    EventKind.DEATH_aa,
    EventKind.DEATH_aA,
    EventKind.DEATH_AA,
)

_JUMPS = kernel.JUMPS.tolist()

_KERNEL_RECORD = {
    RecordMode.EVENTS: kernel.RECORD_EVENTS,
    RecordMode.SAMPLED: kernel.RECORD_SAMPLES,
    RecordMode.STOPS: kernel.RECORD_NONE,
}

# Rows buffered by the kernel between trajectory updates
OUTPUT_BLOCK = 4096


@dataclass(frozen=True)
class Event:
    """One simulated event."""

    kind: EventKind
    time: float


class RandomStream:
    """Buffered uniform and exponential draws from one numpy Generator.

    Both buffers are numpy arrays with a read position, so the compiled
    event loop can consume them directly.
    """

    # Block sizes double from FIRST_BLOCK up to BLOCK_SIZE
    FIRST_BLOCK = 64
    BLOCK_SIZE = 1 << 16

    def __init__(self, rng: np.random.Generator):
        self._rng = rng
        self.uniforms = np.empty(0)
        self.uniform_pos = 0
        self.exponentials = np.empty(0)
        self.exponential_pos = 0
        self._uniform_block = self.FIRST_BLOCK
        self._exponential_block = self.FIRST_BLOCK

    @classmethod
    def from_seed(
        cls, seed: int, replica: int = 0, stream_key: tuple[int, ...] = ()
    ) -> "RandomStream":
        """Independent PCG64 stream for (seed, stream_key, replica)."""
        sequence = np.random.SeedSequence(entropy=seed, spawn_key=(*stream_key, replica))
        return cls(np.random.Generator(np.random.PCG64(sequence)))

    def reserve(self, exponentials: int, uniforms: int) -> None:
        """Top up the buffers so that at least the given counts are unread."""
        if self.exponentials.size - self.exponential_pos < exponentials:
            fresh = self._rng.standard_exponential(self._exponential_block)
            self.exponentials = np.concatenate((self.exponentials[self.exponential_pos:], fresh))
            self.exponential_pos = 0
            self._exponential_block = min(2 * self._exponential_block, self.BLOCK_SIZE)
        if self.uniforms.size - self.uniform_pos < uniforms:
            fresh = self._rng.random(self._uniform_block)
            self.uniforms = np.concatenate((self.uniforms[self.uniform_pos:], fresh))
            self.uniform_pos = 0
            self._uniform_block = min(2 * self._uniform_block, self.BLOCK_SIZE)

    def uniform(self) -> float:
        self.reserve(0, 1)
        value = float(self.uniforms[self.uniform_pos])
        self.uniform_pos += 1
        return value

    def exponential(self) -> float:
        self.reserve(1, 0)
        value = float(self.exponentials[self.exponential_pos])
        self.exponential_pos += 1
        return value


def _advance(
    n_aa: int, n_aA: int, n_AA: int, p: ModelParams, stream: RandomStream
) -> tuple[float, int, bool]:
    """Draw the waiting time and the event index.

    Returns:
        (waiting time, index into SELECTION_ORDER, mutation flag)
    """
    rates = np.array(propensities(n_aa, n_aA, n_AA, p))
    total = float(rates.sum())
    if total <= 0:
        raise ExtinctPopulationError("stepping an extinct population")
    dt = stream.exponential() / total
    index = int(kernel.select_event(rates, stream.uniform() * total))
    mutated = index < 3 and p.mu > 0 and stream.uniform() < p.mu
    return dt, index, mutated


def step(
    state: PopCount, p: ModelParams, stream: RandomStream, t: float = 0.0
) -> tuple[float, Event, PopCount]:
    """Perform one event from ``state``.

    Args:
        state: Current counts
        p: Model parameters
        stream: Random stream of the replica
        t: Current time, used to stamp the event

    Returns:
        (waiting time, event, next state). A MutationBirth leaves the
        counts unchanged.
    """
    if state.is_empty:
        raise ExtinctPopulationError("stepping an extinct population")
    dt, index, mutated = _advance(state.n_aa, state.n_aA, state.n_AA, p, stream)
    if mutated:
        return dt, Event(EventKind.MUTATION_BIRTH, t + dt), state
    jump = _JUMPS[index]
    next_state = PopCount(
        n_aa=state.n_aa + jump[0],
        n_aA=state.n_aA + jump[1],
        n_AA=state.n_AA + jump[2],
    )
    return dt, Event(SELECTION_ORDER[index], t + dt), next_state


def simulate(
    p: ModelParams,
    init: PopCount,
    stop: StopSpec,
    seed: int,
    mode: RecordMode = RecordMode.STOPS,
    replica: int = 0,
    stream_key: tuple[int, ...] = (),
    dt: float = 1.0,
    stream: Optional[RandomStream] = None,
) -> tuple[Trajectory, StoppingRecord]:
    """Run one replica until a terminating stopping condition holds.

    Args:
        p: Model parameters
        init: Initial counts
        stop: Stopping conditions
        seed: Base seed
        mode: Trajectory recording mode
        replica: Replica index, selects the random stream
        stream_key: Extra stream key, e.g. the index of K in a sweep
        dt: Sampling interval for sampled mode
        stream: Explicit random stream (overrides seed derivation)

    Returns:
        (Trajectory, StoppingRecord)
    """
    if mode == RecordMode.SAMPLED and dt <= 0:
        raise ParameterError("sampling interval must be > 0")
    if stream is None:
        stream = RandomStream.from_seed(seed, replica, stream_key)
    tracker = StopTracker(stop, p.K)
    trajectory = Trajectory(mode=mode, dt=dt)
    counts = np.array(init.as_tuple(), dtype=np.int64)
    n_aa, n_aA, n_AA = init.as_tuple()
    t = 0.0
    events = 0
    sample_index = 0
    t_max = stop.t_max if stop.t_max is not None else math.inf

    record_mode = _KERNEL_RECORD[mode]
    capacity = OUTPUT_BLOCK if record_mode != kernel.RECORD_NONE else 1
    out_t = np.empty(capacity)
    out_counts = np.empty((capacity, 3), dtype=np.int64)

    if mode != RecordMode.SAMPLED:
        trajectory.append(0.0, n_aa, n_aA, n_AA)

    reason = tracker.observe(0.0, n_aa, n_aA, n_AA)
    if init.is_empty and stop.stop_on_extinction:
        reason = StopReason.EXTINCT
    while reason is None:
        stream.reserve(1, 2)
        fix_count, watch_loss, hit_count, watch_aa, watch_mutation = tracker.watch()
        (
            t,
            stream.exponential_pos,
            stream.uniform_pos,
            batch_events,
            flag,
            rows,
            sample_index,
        ) = kernel.run_events(
            counts, t, t_max,
            p.f, p.D, p.delta, p.death_aA, p.c, float(p.K), p.mu,
            stream.exponentials, stream.exponential_pos,
            stream.uniforms, stream.uniform_pos,
            fix_count, watch_loss, hit_count, watch_aa, watch_mutation,
            record_mode, sample_index, dt, out_t, out_counts,
        )
        t = float(t)
        events += int(batch_events)
        if rows:
            trajectory.extend(out_t[:rows], out_counts[:rows])
        n_aa, n_aA, n_AA = (int(v) for v in counts)

        if flag == kernel.THRESHOLD:
            reason = tracker.observe(t, n_aa, n_aA, n_AA)
            if mode == RecordMode.STOPS and tracker.fresh:
                trajectory.append(t, n_aa, n_aA, n_AA)
        elif flag == kernel.MUTATION:
            reason = tracker.mutation(t)
            if mode == RecordMode.STOPS and tracker.fresh:
                trajectory.append(t, n_aa, n_aA, n_AA)
        elif flag == kernel.TIME_CAP:
            t = t_max
            reason = StopReason.TIME_CAP
        elif flag == kernel.EXTINCT:
            if not stop.stop_on_extinction:
                raise ExtinctPopulationError("stepping an extinct population")
            reason = StopReason.EXTINCT

    if mode == RecordMode.SAMPLED:
        while sample_index * dt <= t:
            trajectory.append(float(sample_index * dt), n_aa, n_aA, n_AA)
            sample_index += 1
    elif mode == RecordMode.STOPS:
        trajectory.append(t, n_aa, n_aA, n_AA)

    logger.debug(f"Replica {replica}: {reason.value} at t={t:.4f} after {events} events")
    record = tracker.to_record(
        t_end=t,
        reason=reason,
        final_state=PopCount(n_aa=n_aa, n_aA=n_aA, n_AA=n_AA),
        events=events,
        seed=seed,
        replica=replica,
    )
    return trajectory, record
