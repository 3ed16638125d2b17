import numpy as np
import pytest

from src.exceptions import ExtinctPopulationError, ParameterError
from src.models import ModelParams, PopCount
from src.ssa import (
    EventKind,
    RandomStream,
    RecordMode,
    StopReason,
    StopSpec,
    StoppingRecord,
    run_replicas,
    simulate,
    step,
    trajectory_csv,
)
from src.ssa import kernel
from src.ssa.stopping import StopTracker


@pytest.fixture
def resident() -> PopCount:
    return PopCount(n_aa=270, n_aA=1, n_AA=0)


@pytest.fixture
def doomed() -> ModelParams:
    """Deaths far above births: every population dies out quickly."""
    return ModelParams(f=0.1, D=5.0, delta=0.3, c=1.0, K=10)


def test_random_stream_reproducible():
    a = RandomStream.from_seed(7, replica=3)
    b = RandomStream.from_seed(7, replica=3)
    c = RandomStream.from_seed(7, replica=4)
    draws_a = [a.uniform() for _ in range(200)]
    assert draws_a == [b.uniform() for _ in range(200)]
    assert draws_a != [c.uniform() for _ in range(200)]
    assert all(0.0 <= u < 1.0 for u in draws_a)


def test_step_changes_one_genotype(params, resident):
    stream = RandomStream.from_seed(1)
    state, t = resident, 0.0
    for _ in range(50):
        dt, event, nxt = step(state, params, stream, t)
        assert dt > 0
        assert event.time == pytest.approx(t + dt)
        diff = [abs(a - b) for a, b in zip(nxt.as_tuple(), state.as_tuple())]
        assert sum(diff) == 1
        state, t = nxt, t + dt


def test_step_empty_population(params):
    with pytest.raises(ExtinctPopulationError, match="stepping an extinct population"):
        step(PopCount(n_aa=0, n_aA=0, n_AA=0), params, RandomStream.from_seed(0))


def test_mutation_birth_leaves_counts(params, resident):
    p = params.model_copy(update={"mu": 1.0})
    stream = RandomStream.from_seed(2)
    for _ in range(20):
        _, event, nxt = step(resident, p, stream)
        if event.kind == EventKind.MUTATION_BIRTH:
            assert nxt == resident
            return
    pytest.fail("no mutation birth with mu = 1")


def test_simulate_is_reproducible(params, resident):
    stop = StopSpec(delta_fix=0.1, stop_on_fixation=True, stop_on_loss=True, t_max=50.0)
    first = simulate(params, resident, stop, seed=11, replica=5)
    second = simulate(params, resident, stop, seed=11, replica=5)
    assert first[1] == second[1]
    assert first[0].t == second[0].t


def test_time_cap(params):
    init = PopCount(n_aa=270, n_aA=0, n_AA=0)
    _, record = simulate(params, init, StopSpec(t_max=1.0, detect_loss=False), seed=0)
    assert record.reason == StopReason.TIME_CAP
    assert record.t_end == 1.0
    assert record.events > 0


def test_fixation_or_loss(params, resident):
    stop = StopSpec(delta_fix=0.1, stop_on_fixation=True, stop_on_loss=True)
    for replica in range(10):
        _, record = simulate(params, resident, stop, seed=3, replica=replica)
        assert record.reason in (StopReason.FIXATION, StopReason.MUTANT_LOST)
        if record.reason == StopReason.FIXATION:
            assert record.fixed
            assert record.final_state.mutant >= 10
        else:
            assert record.final_state.mutant == 0
            assert not record.fixed


def test_extinction_stops_run(doomed):
    _, record = simulate(doomed, PopCount(n_aa=3, n_aA=0, n_AA=0), StopSpec(detect_loss=False), seed=0)
    assert record.reason == StopReason.EXTINCT
    assert record.final_state.is_empty


def test_empty_start_is_extinct_at_zero(params):
    _, record = simulate(params, PopCount(n_aa=0, n_aA=0, n_AA=0), StopSpec(), seed=0)
    assert record.reason == StopReason.EXTINCT
    assert record.t_end == 0.0


def test_extinction_raises_when_not_stopping(doomed):
    stop = StopSpec(detect_loss=False, stop_on_extinction=False, t_max=1e6)
    with pytest.raises(ExtinctPopulationError):
        simulate(doomed, PopCount(n_aa=3, n_aA=0, n_AA=0), stop, seed=0)


def test_mutation_stop(params, resident):
    p = params.model_copy(update={"mu": 1.0})
    stop = StopSpec(stop_on_mutation=True, detect_loss=False)
    _, record = simulate(p, resident, stop, seed=4)
    assert record.reason == StopReason.MUTATION
    assert record.tau_1 == record.t_end


def test_hits_armed_without_threshold(params):
    init = PopCount(n_aa=270, n_aA=0, n_AA=0)
    stop = StopSpec(hit_levels=[0.0], stop_on_hits=True, detect_loss=False)
    _, record = simulate(params, init, stop, seed=0)
    assert record.reason == StopReason.HITS_COMPLETE
    assert record.tau_hit[0.0] == 0.0
    assert record.hit_states[0.0] == init


def test_hits_wait_for_fixation(params):
    tracker = StopTracker(StopSpec(delta_fix=0.1, hit_levels=[0.05], stop_on_hits=True), K=100)
    assert tracker.fix_count == 10
    assert tracker.hit_counts == {0.05: 5}
    assert tracker.observe(0.0, 270, 1, 0) is None
    assert tracker.tau_hit[0.05] is None
    assert tracker.observe(1.0, 260, 10, 0) is None
    assert tracker.tau_delta_mut == 1.0
    assert tracker.observe(2.0, 260, 5, 10) == StopReason.HITS_COMPLETE
    assert tracker.tau_hit[0.05] == 2.0


def test_fix_count_at_least_one():
    assert StopTracker(StopSpec(delta_fix=0.001), K=10).fix_count == 1


def test_events_mode_records_every_jump(params, resident):
    stop = StopSpec(t_max=0.5, detect_loss=False)
    trajectory, record = simulate(params, resident, stop, seed=8, mode=RecordMode.EVENTS)
    assert len(trajectory) == record.events + 1
    assert all(b > a for a, b in zip(trajectory.t, trajectory.t[1:]))
    assert trajectory.state_at(0.0) == resident


def test_sampled_mode_grid(params, resident):
    stop = StopSpec(t_max=5.0, detect_loss=False)
    trajectory, record = simulate(params, resident, stop, seed=8, mode=RecordMode.SAMPLED, dt=1.0)
    assert trajectory.t == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
    assert trajectory.state_at(5.0) == record.final_state
    frame = trajectory.density_frame(params.K)
    assert list(frame.columns) == ["t", "x_aa", "y_aA", "z_AA"]


def test_sampled_mode_rejects_bad_interval(params, resident):
    with pytest.raises(ParameterError):
        simulate(params, resident, StopSpec(t_max=1.0), seed=0, mode=RecordMode.SAMPLED, dt=0.0)


def test_trajectory_csv_header(params, resident):
    trajectory, _ = simulate(params, resident, StopSpec(t_max=0.1), seed=0, mode=RecordMode.EVENTS)
    assert trajectory_csv(trajectory).splitlines()[0] == "t,N_aa,N_aA,N_AA"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"delta_fix": 0.0},
        {"hit_levels": [-0.1]},
        {"t_max": 0.0},
        {"stop_on_fixation": True},
        {"detect_loss": False, "stop_on_extinction": False},
    ],
)
def test_invalid_stop_spec(kwargs):
    with pytest.raises(ParameterError):
        StopSpec(**kwargs)


def test_record_json_round_trip(params, resident):
    stop = StopSpec(delta_fix=0.1, stop_on_fixation=True, stop_on_loss=True, hit_levels=[0.05])
    _, record = simulate(params, resident, stop, seed=1)
    assert StoppingRecord.model_validate_json(record.model_dump_json()) == record


def test_replicas_ordered_and_offset(params, resident):
    stop = StopSpec(delta_fix=0.1, stop_on_fixation=True, stop_on_loss=True, t_max=20.0)
    results = run_replicas(params, resident, stop, base_seed=5, count=4, start=10)
    assert [record.replica for _, record in results] == [10, 11, 12, 13]
    assert all(trajectory is None for trajectory, _ in results)
    _, single = simulate(params, resident, stop, seed=5, replica=12)
    assert results[2][1] == single


def test_replicas_independent_of_workers(params, resident):
    stop = StopSpec(delta_fix=0.1, stop_on_fixation=True, stop_on_loss=True, t_max=20.0)
    serial = run_replicas(params, resident, stop, base_seed=9, count=4)
    parallel = run_replicas(params, resident, stop, base_seed=9, count=4, workers=2)
    assert [r for _, r in serial] == [r for _, r in parallel]


def test_birth_split_from_single_heterozygote(params):
    stream = RandomStream.from_seed(11)
    state = PopCount(n_aa=0, n_aA=1, n_AA=0)
    births = {EventKind.BIRTH_aa: 0, EventKind.BIRTH_aA: 0, EventKind.BIRTH_AA: 0}
    for _ in range(6000):
        _, event, _ = step(state, params, stream)
        if event.kind in births:
            births[event.kind] += 1
    total = sum(births.values())
    assert births[EventKind.BIRTH_aa] / total == pytest.approx(0.25, abs=0.03)
    assert births[EventKind.BIRTH_aA] / total == pytest.approx(0.5, abs=0.03)
    assert births[EventKind.BIRTH_AA] / total == pytest.approx(0.25, abs=0.03)


def test_up_jump_even_at_mutant_equilibrium(params):
    stream = RandomStream.from_seed(12)
    state = PopCount(n_aa=0, n_aA=0, n_AA=round(params.nbar_A * params.K))
    up = 0
    for _ in range(6000):
        _, _, nxt = step(state, params, stream)
        up += nxt.total > state.total
    assert up / 6000 == pytest.approx(0.5, abs=0.03)


def test_resident_never_produces_mutant_without_mutation(params):
    stop = StopSpec(t_max=50.0, detect_loss=False)
    trajectory, record = simulate(params, PopCount(n_aa=270, n_aA=0, n_AA=0), stop, seed=13, mode=RecordMode.EVENTS)
    assert record.events > 10**4
    assert max(trajectory.n_aA) == 0
    assert max(trajectory.n_AA) == 0
    steps = np.abs(np.diff(np.array(trajectory.n_aa)))
    assert (steps == 1).all()


class TestKernel:
    def _run(self, counts, exponentials, uniforms, **kwargs):
        args = dict(
            t=0.0, t_max=10.0, f=4.0, D=1.0, delta=0.3, death_aA=1.0, c=1.0, K=100, mu=0.0,
            fix_count=-1, watch_loss=False, hit_count=-1, watch_aa=False, watch_mutation=False,
            record=kernel.RECORD_EVENTS, sample_index=0, dt=1.0,
        )
        args.update(kwargs)
        out_t = np.zeros(4)
        out_counts = np.zeros((4, 3), dtype=np.int64)
        result = kernel.run_events(
            counts, args["t"], args["t_max"], args["f"], args["D"], args["delta"],
            args["death_aA"], args["c"], args["K"], args["mu"],
            np.asarray(exponentials, dtype=float), 0, np.asarray(uniforms, dtype=float), 0,
            args["fix_count"], args["watch_loss"], args["hit_count"], args["watch_aa"],
            args["watch_mutation"], args["record"], args["sample_index"], args["dt"],
            out_t, out_counts,
        )
        return result, out_t, out_counts

    def test_one_event_then_out_of_draws(self):
        counts = np.array([0, 1, 0], dtype=np.int64)
        (t, exp_pos, unif_pos, events, flag, rows, _), out_t, out_counts = self._run(
            counts, [1.0], [0.1, 0.5]
        )
        assert flag == kernel.NEED_DRAWS
        assert (exp_pos, unif_pos, events, rows) == (1, 1, 1, 1)
        assert t == pytest.approx(1 / 5.01)
        assert counts.tolist() == [1, 1, 0]
        assert out_t[0] == pytest.approx(t)
        assert out_counts[0].tolist() == [1, 1, 0]

    def test_empty_population(self):
        counts = np.zeros(3, dtype=np.int64)
        (_, _, _, events, flag, rows, _), _, _ = self._run(counts, [1.0], [0.5, 0.5])
        assert flag == kernel.EXTINCT
        assert events == rows == 0

    def test_time_cap_leaves_counts(self):
        counts = np.array([0, 1, 0], dtype=np.int64)
        (t, exp_pos, _, events, flag, _, _), _, _ = self._run(counts, [100.0], [0.1, 0.5])
        assert flag == kernel.TIME_CAP
        assert (t, exp_pos, events) == (0.0, 0, 0)
        assert counts.tolist() == [0, 1, 0]

    def test_threshold_on_heterozygote_hit(self):
        counts = np.array([0, 1, 0], dtype=np.int64)
        # target 0.9 * 5.01 falls in the aA death
        (_, _, _, events, flag, _, _), _, _ = self._run(counts, [1.0, 1.0], [0.9, 0.5], hit_count=0)
        assert flag == kernel.THRESHOLD
        assert events == 1
        assert counts.tolist() == [0, 0, 0]
