"""Independent replicas of the exact simulator."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from ..models import ModelParams, PopCount
from .engine import simulate
from .recording import RecordMode, Trajectory
from .stopping import StopSpec, StoppingRecord

logger = logging.getLogger(__name__)

ReplicaResult = tuple[Optional[Trajectory], StoppingRecord]


def _replica_worker(args: tuple) -> ReplicaResult:
    """Module-level worker so that process pools can pickle it."""
    p, init, stop, base_seed, index, mode, keep, stream_key, dt = args
    trajectory, record = simulate(
        p, init, stop, base_seed, mode=mode, replica=index, stream_key=stream_key, dt=dt
    )
    return (trajectory if keep else None), record


def run_replicas(
    p: ModelParams,
    init: PopCount,
    stop: StopSpec,
    base_seed: int,
    count: int,
    mode: RecordMode = RecordMode.STOPS,
    keep_trajectories: bool = False,
    workers: int = 1,
    stream_key: tuple[int, ...] = (),
    start: int = 0,
    dt: float = 1.0,
) -> list[ReplicaResult]:
    """Run replicas ``start .. start+count-1``, ordered by index.

    Replica i depends only on (base_seed, stream_key, i), so the result
    does not depend on ``workers``.

    Args:
        p: Model parameters
        init: Initial counts
        stop: Stopping conditions
        base_seed: Base seed
        count: Number of replicas
        mode: Recording mode
        keep_trajectories: Keep trajectories (otherwise None)
        workers: Process count, 1 runs in-process
        stream_key: Extra stream key
        start: Index of the first replica
        dt: Sampling interval for sampled mode

    Returns:
        List of (Trajectory or None, StoppingRecord)
    """
    jobs = [
        (p, init, stop, base_seed, start + i, mode, keep_trajectories, stream_key, dt)
        for i in range(count)
    ]
    if workers <= 1 or count <= 1:
        return [_replica_worker(job) for job in jobs]

    logger.info(f"Running {count} replicas on {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_replica_worker, jobs, chunksize=max(1, count // (4 * workers))))
