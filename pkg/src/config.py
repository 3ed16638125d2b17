"""Run configuration: flat ``key = value`` files plus command-line overrides."""

import logging
import os
from pathlib import Path
from typing import Any, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError

from .exceptions import ConfigError
from .models import AnalysisParams, Dominance, ModelParams
from .rates import validate_analysis, validate_params
from .ssa import RecordMode

logger = logging.getLogger(__name__)

MODEL_KEYS = ("f", "D", "delta", "c", "K", "mu")
ANALYSIS_KEYS = ("eps", "theta", "alpha", "delta_fix", "rho", "floor_scale")
RUN_KEYS = ("dominance", "seed", "replicas", "t_max", "record", "dt", "workers", "Ks")
ALLOWED_KEYS = frozenset(MODEL_KEYS + ANALYSIS_KEYS + RUN_KEYS)

COMMANDS = ("simulate", "ode", "fixation", "survival", "decay", "ladder", "chain", "window")

DEFAULT_OUTPUT_DIR = "output"
DEFAULT_REPLICAS = 100


class ChainOptions(BaseModel):
    """Options of the ``chain`` command."""

    lo: int = 0
    hi: int = 100
    c0: float = 0.0
    reflect_at_lo: bool = False


class RunConfig(BaseModel):
    """Everything a command needs, embedded verbatim in its outputs."""

    command: str
    params: ModelParams
    analysis: AnalysisParams
    seed: int = 0
    replicas: int = DEFAULT_REPLICAS
    out_dir: str = DEFAULT_OUTPUT_DIR
    record: RecordMode = RecordMode.STOPS
    t_max: Optional[float] = None
    dt: float = 1.0
    workers: int = 1
    Ks: list[int] = Field(default_factory=list)
    chain: ChainOptions = Field(default_factory=ChainOptions)
    C_l: float = 1.0
    C_u: float = 1.0
    crossings: bool = False
    timing: bool = False
    distance: bool = False

    @property
    def K_grid(self) -> list[int]:
        return self.Ks or [self.params.K]


def _as_int(key: str, value: Any) -> int:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {key}: {value}")
    if not number.is_integer():
        raise ConfigError(f"{key} must be an integer, got {value}")
    return int(number)


def _as_float(key: str, value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {key}: {value}")


def _as_dominance(value: Any) -> Dominance:
    try:
        return Dominance(str(value).lower())
    except ValueError:
        raise ConfigError(f"invalid value for dominance: {value}")


def _parse_Ks(value: Any) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [_as_int("Ks", v) for v in value]
    return [_as_int("Ks", v) for v in str(value).replace(";", ",").split(",") if v.strip()]


def read_config_file(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` file, rejecting unknown keys."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    values = {k: v for k, v in dotenv_values(path).items() if v is not None}
    for key in values:
        if key not in ALLOWED_KEYS:
            raise ConfigError(f"unknown key: {key}")
    return values


def parse_config(path: Optional[str | Path], overrides: dict[str, Any]) -> RunConfig:
    """Merge a config file with flag overrides and validate the result.

    Args:
        path: Config file, or None for flags only
        overrides: Flag values; None means "not given". Must contain ``command``.

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: Unknown or missing keys, malformed values
        ParameterError: Violated model or analysis invariant
    """
    values: dict[str, Any] = dict(read_config_file(path)) if path else {}
    extras: dict[str, Any] = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in ALLOWED_KEYS:
            values[key] = value
        else:
            extras[key] = value

    command = extras.pop("command", None)
    if command not in COMMANDS:
        raise ConfigError(f"unknown command: {command}")

    for key in MODEL_KEYS:
        if key not in values:
            raise ConfigError(f"missing required key: {key}")

    params = ModelParams(
        f=_as_float("f", values["f"]),
        D=_as_float("D", values["D"]),
        delta=_as_float("delta", values["delta"]),
        c=_as_float("c", values["c"]),
        K=_as_int("K", values["K"]),
        mu=_as_float("mu", values["mu"]),
        dominance=_as_dominance(values.get("dominance", Dominance.DOMINANT.value)),
    )
    analysis = AnalysisParams(
        **{key: _as_float(key, values[key]) for key in ANALYSIS_KEYS if key in values}
    )

    neutral = command == "fixation"
    validate_params(params, allow_neutral=neutral)
    if not (neutral and params.delta == 0):
        validate_analysis(analysis, params)

    run: dict[str, Any] = {
        "command": command,
        "params": params,
        "analysis": analysis,
        "out_dir": os.getenv("MENDEL_OUTPUT_DIR", DEFAULT_OUTPUT_DIR),
        "workers": _as_int("workers", os.getenv("MENDEL_WORKERS", "1")),
    }
    for key in ("seed", "replicas", "workers"):
        if key in values:
            run[key] = _as_int(key, values[key])
    for key in ("t_max", "dt"):
        if key in values:
            run[key] = _as_float(key, values[key])
    if "record" in values:
        run["record"] = values["record"]
    if "Ks" in values:
        run["Ks"] = _parse_Ks(values["Ks"])

    chain = {k: extras.pop(k) for k in ("lo", "hi", "c0", "reflect_at_lo") if k in extras}
    if chain:
        run["chain"] = ChainOptions(**chain)
    run.update(extras)

    try:
        cfg = RunConfig(**run)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e
    if cfg.replicas < 1:
        raise ConfigError("replicas must be >= 1")
    if cfg.seed < 0:
        raise ConfigError("seed must be >= 0")
    logger.debug(f"Parsed config for {command}: K={params.K}, seed={cfg.seed}")
    return cfg
