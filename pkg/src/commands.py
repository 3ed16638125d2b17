"""Command handlers: run one experiment and write its outputs."""

import logging
from typing import Any, Callable

from .chains import (
    ChainSpec,
    branching_survival,
    hitting_probabilities,
    invasion_branching,
    oracle_potential,
)
from .chains.potential import MAX_ORACLE_SIZE, expected_returns
from .config import RunConfig
from .experiments import (
    approximation_distance,
    decay_comparison,
    deterministic_decay,
    estimate_fixation,
    ladder,
    ladder_crossings,
    mutation_timing,
    mutation_window,
    survival_scaling,
)
from .experiments.decay import invasion_start
from .experiments.fixation import resident_with_mutant
from .ode import center_manifold, fixed_points, integrate
from .rates import allele_frequency, derived, mutation_rate_AA
from .ssa import StopSpec, simulate
from .writer import ResultWriter, WriteResult

import pandas as pd

logger = logging.getLogger(__name__)

DEFAULT_ODE_HORIZON = 200.0
DEFAULT_DECAY_HORIZON = 200.0

Handler = Callable[[RunConfig, ResultWriter, dict[str, Any]], tuple[WriteResult, dict[str, Any]]]


def run_simulate(cfg: RunConfig, writer: ResultWriter, config: dict[str, Any]):
    """One replica from the resident equilibrium plus one heterozygote."""
    p, a = cfg.params, cfg.analysis
    floor = a.floor_level(p.K)
    levels = [a.eps, floor] if floor < a.eps else [a.eps]
    stop = StopSpec(
        delta_fix=a.delta_fix,
        stop_on_loss=True,
        hit_levels=levels,
        stop_on_hits=True,
        stop_on_mutation=p.mu > 0,
        t_max=cfg.t_max,
    )
    trajectory, record = simulate(
        p, resident_with_mutant(p), stop, cfg.seed, mode=cfg.record, dt=cfg.dt
    )
    result = WriteResult()
    result.csv_paths.append(str(writer.write_csv("simulate", "trajectory", config, trajectory.to_frame())))
    result.json_paths.append(str(writer.write_json("simulate", "record", config, record)))

    summary: dict[str, Any] = {"reason": record.reason.value, "t_end": record.t_end}
    final = record.final_state
    if final is not None and not final.is_empty:
        summary["allele_frequency_A"] = allele_frequency(final)
        summary["mutation_rate_AA"] = mutation_rate_AA(final, p)
    return result, summary


def run_ode(cfg: RunConfig, writer: ResultWriter, config: dict[str, Any]):
    """Integrated path, fixed points, center manifold and the 1/t check."""
    p, a = cfg.params, cfg.analysis
    horizon = cfg.t_max or DEFAULT_ODE_HORIZON
    path = integrate(p, invasion_start(p, a), horizon)
    resident, mutant = fixed_points(p)
    analysis: dict[str, Any] = {
        "derived": derived(p, a).model_dump(mode="json"),
        "fixed_points": [resident.model_dump(mode="json"), mutant.model_dump(mode="json")],
        "center_manifold": center_manifold(p).model_dump(mode="json") if p.D > 0 else None,
    }
    decay = deterministic_decay(p, a)

    result = WriteResult()
    result.csv_paths.append(str(writer.write_csv("ode", "trajectory", config, path.sampled(cfg.dt))))
    result.json_paths.append(str(writer.write_json("ode", "fixed_points", config, analysis)))
    result.json_paths.append(str(writer.write_json("ode", "decay", config, decay)))
    summary = {
        "final_state": list(path.final_state().as_tuple()),
        "tail_slope": decay.tail_slope,
        "within_fraction": decay.within_fraction,
    }
    return result, summary


def run_fixation(cfg: RunConfig, writer: ResultWriter, config: dict[str, Any]):
    estimate = estimate_fixation(cfg.params, cfg.analysis, cfg.replicas, cfg.seed, workers=cfg.workers)
    result = WriteResult()
    result.json_paths.append(str(writer.write_json("fixation", "fixation", config, estimate)))
    return result, {"estimate": estimate.estimate, "std_error": estimate.std_error, "target": estimate.target}


def run_survival(cfg: RunConfig, writer: ResultWriter, config: dict[str, Any]):
    report = survival_scaling(
        cfg.params, cfg.analysis, cfg.K_grid, cfg.replicas, cfg.seed, workers=cfg.workers
    )
    result = WriteResult()
    result.json_paths.append(str(writer.write_json("survival", "survival", config, report)))
    result.csv_paths.append(str(writer.write_csv("survival", "samples", config, report.samples_frame())))
    summary = {"slope": report.slope_fit.slope if report.slope_fit else None}
    return result, summary


def run_decay(cfg: RunConfig, writer: ResultWriter, config: dict[str, Any]):
    p, a = cfg.params, cfg.analysis
    report = decay_comparison(
        p, a, p.K, cfg.seed, dt=cfg.dt, horizon=cfg.t_max or DEFAULT_DECAY_HORIZON
    )
    result = WriteResult()
    result.json_paths.append(str(writer.write_json("decay", "comparison", config, report)))
    result.csv_paths.append(str(writer.write_csv("decay", "series", config, report.series_frame())))
    summary: dict[str, Any] = {
        "stochastic_within_fraction": report.stochastic_within_fraction,
        "ode_within_fraction": report.ode_within_fraction,
    }
    if cfg.distance:
        distances = approximation_distance(
            p, a, cfg.K_grid, cfg.replicas, cfg.seed, workers=cfg.workers
        )
        result.json_paths.append(str(writer.write_json("decay", "distance", config, distances)))
        summary["median_decreasing"] = distances.median_decreasing
    return result, summary


def run_ladder(cfg: RunConfig, writer: ResultWriter, config: dict[str, Any]):
    p, a = cfg.params, cfg.analysis
    schedule = ladder(p, a, p.K, cfg.C_l, cfg.C_u)
    result = WriteResult()
    result.json_paths.append(str(writer.write_json("ladder", "schedule", config, schedule)))
    result.csv_paths.append(str(writer.write_csv("ladder", "rungs", config, schedule.rungs_frame())))
    summary: dict[str, Any] = {"i_max": schedule.i_max, "in_regime": schedule.in_regime}
    if cfg.crossings:
        crossings = ladder_crossings(p, a, p.K, cfg.seed)
        result.json_paths.append(str(writer.write_json("ladder", "crossings", config, crossings)))
        summary["median_implied_constant"] = crossings.median_implied_constant
    return result, summary


def run_chain(cfg: RunConfig, writer: ResultWriter, config: dict[str, Any]):
    """Hitting-probability table of the drifted chain plus the invasion branching process."""
    options = cfg.chain
    spec = ChainSpec.drifted(options.lo, options.hi, options.c0, cfg.params.K, options.reflect_at_lo)
    h = hitting_probabilities(spec)
    states = list(range(spec.lo, spec.hi + 1))
    table = pd.DataFrame({"z": states, "h": h})
    if spec.hi - spec.lo <= MAX_ORACLE_SIZE:
        table["oracle"] = oracle_potential(spec)

    branching = invasion_branching(cfg.params)
    details = {
        "branching": branching.model_dump(mode="json"),
        "invasion_survival": branching_survival(branching),
        "expected_returns": expected_returns(spec) if spec.reflect_at_lo else None,
    }
    result = WriteResult()
    result.csv_paths.append(str(writer.write_csv("chain", "potential", config, table)))
    result.json_paths.append(str(writer.write_json("chain", "branching", config, details)))
    return result, {"states": len(states), "invasion_survival": details["invasion_survival"]}


def run_window(cfg: RunConfig, writer: ResultWriter, config: dict[str, Any]):
    p, a = cfg.params, cfg.analysis
    report = mutation_window(p, a, p.K, p.mu)
    result = WriteResult()
    result.json_paths.append(str(writer.write_json("window", "window", config, report)))
    summary: dict[str, Any] = {"passed": report.passed, "note": report.note}
    if cfg.timing:
        timing = mutation_timing(p, a, cfg.replicas, cfg.seed, t_max=cfg.t_max, workers=cfg.workers)
        result.json_paths.append(str(writer.write_json("window", "timing", config, timing)))
        summary["window_fraction"] = timing.window_fraction
    return result, summary


COMMAND_HANDLERS: dict[str, Handler] = {
    "simulate": run_simulate,
    "ode": run_ode,
    "fixation": run_fixation,
    "survival": run_survival,
    "decay": run_decay,
    "ladder": run_ladder,
    "chain": run_chain,
    "window": run_window,
}
