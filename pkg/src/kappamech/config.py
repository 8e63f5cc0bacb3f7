"""Run-configuration loading and strict validation.

Configs are JSON documents mirroring the CLI flags.  Validation is strict:
unknown fields are rejected with their JSON path, wrong types and malformed
values name the offending key, and syntax errors keep the parser's line and
column.  The same shape is documented in docs/run_config.schema.json.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import charts
from .charts import State
from .dynamics import IntegratorConfig
from .errors import ConfigError, DomainError
from .integrals import CONSERVED_NAMES, IntegralSpec
from .systems import FAMILIES, PARAMS_BY_FAMILY, SystemSpec, parse_gamma

_TOP_KEYS = {
    "system",
    "chart",
    "initial_state",
    "t_end",
    "integrator",
    "integrals",
    "outputs",
    "seed",
    "drift_threshold",
}
_SYSTEM_KEYS = {"family", "kappa", "params"}
_STATE_KEYS = {"coords", "momenta"}
_INTEGRATOR_KEYS = {"method", "rel_tol", "abs_tol", "max_step", "max_steps"}
_OUTPUT_KEYS = {"directory", "formats", "plots", "sample_dt"}


@dataclass
class OutputOptions:
    directory: str = "out"
    formats: tuple[str, ...] = ("csv", "json")
    plots: bool = True
    sample_dt: float | None = None


@dataclass
class RunConfig:
    system: SystemSpec
    chart: str
    initial_state: State
    t_end: float
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    integrals: tuple[IntegralSpec, ...] = ()
    outputs: OutputOptions = field(default_factory=OutputOptions)
    seed: int = 0
    drift_threshold: float = 1e-6


def _reject_unknown(mapping: dict, allowed: set, path: str):
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown field {key!r} at {path}")


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise ConfigError(f"missing field {key!r} at {path}")
    return mapping[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path} must be a number, got {value!r}")
    return float(value)


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, "config")

    sys_data = _require(data, "system", "config")
    if not isinstance(sys_data, dict):
        raise ConfigError("config.system must be an object")
    _reject_unknown(sys_data, _SYSTEM_KEYS, "config.system")
    family = _require(sys_data, "family", "config.system")
    if family not in FAMILIES:
        raise ConfigError(f"config.system.family: unknown family {family!r}")
    params = sys_data.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("config.system.params must be an object")
    allowed_params = set(PARAMS_BY_FAMILY[family])
    _reject_unknown(params, allowed_params, "config.system.params")
    kwargs = dict(params)
    if "gamma" in kwargs:
        try:
            kwargs["gamma"] = parse_gamma(kwargs["gamma"])
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"config.system.params.gamma: {exc}") from exc
    if "coefficients" in kwargs:
        if not isinstance(kwargs["coefficients"], list):
            raise ConfigError("config.system.params.coefficients must be an array")
        kwargs["coefficients"] = tuple(kwargs["coefficients"])
    try:
        system = SystemSpec(
            family=family, kappa=_number(sys_data.get("kappa", 0.0), "config.system.kappa"), **kwargs
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config.system: {exc}") from exc

    chart = _require(data, "chart", "config")
    if chart not in charts.CHARTS:
        raise ConfigError(f"config.chart: unknown chart {chart!r}")

    st_data = _require(data, "initial_state", "config")
    if not isinstance(st_data, dict):
        raise ConfigError("config.initial_state must be an object")
    _reject_unknown(st_data, _STATE_KEYS, "config.initial_state")
    coords = _require(st_data, "coords", "config.initial_state")
    momenta = _require(st_data, "momenta", "config.initial_state")
    try:
        state = charts.make_state(
            chart,
            system.kappa,
            [_number(v, "config.initial_state.coords") for v in coords],
            [_number(v, "config.initial_state.momenta") for v in momenta],
        )
    except (DomainError, ValueError) as exc:
        raise ConfigError(f"config.initial_state: {exc}") from exc

    t_end = _number(_require(data, "t_end", "config"), "config.t_end")
    if t_end <= 0.0:
        raise ConfigError("config.t_end must be positive")

    integ_data = data.get("integrator", {})
    if not isinstance(integ_data, dict):
        raise ConfigError("config.integrator must be an object")
    _reject_unknown(integ_data, _INTEGRATOR_KEYS, "config.integrator")
    try:
        integrator = IntegratorConfig(**integ_data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config.integrator: {exc}") from exc

    names = data.get("integrals", [])
    if not isinstance(names, list):
        raise ConfigError("config.integrals must be an array of names")
    ispecs = []
    for name in names:
        if name not in CONSERVED_NAMES:
            raise ConfigError(
                f"config.integrals: {name!r} is not a conserved-integral name {CONSERVED_NAMES}"
            )
        try:
            ispecs.append(IntegralSpec(name, system))
        except ValueError as exc:
            raise ConfigError(f"config.integrals: {exc}") from exc

    out_data = data.get("outputs", {})
    if not isinstance(out_data, dict):
        raise ConfigError("config.outputs must be an object")
    _reject_unknown(out_data, _OUTPUT_KEYS, "config.outputs")
    formats = tuple(out_data.get("formats", ("csv", "json")))
    for fmt in formats:
        if fmt not in ("csv", "json"):
            raise ConfigError(f"config.outputs.formats: unknown format {fmt!r}")
    sample_dt = out_data.get("sample_dt")
    outputs = OutputOptions(
        directory=out_data.get("directory", "out"),
        formats=formats,
        plots=bool(out_data.get("plots", True)),
        sample_dt=None if sample_dt is None else _number(sample_dt, "config.outputs.sample_dt"),
    )

    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("config.seed must be a non-negative integer")

    drift = _number(data.get("drift_threshold", 1e-6), "config.drift_threshold")

    return RunConfig(
        system=system,
        chart=chart,
        initial_state=state,
        t_end=t_end,
        integrator=integrator,
        integrals=tuple(ispecs),
        outputs=outputs,
        seed=seed,
        drift_threshold=drift,
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_config(data)
