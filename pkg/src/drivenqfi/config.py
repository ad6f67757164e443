"""Run configuration and its key-value text format.

One ``key = value`` pair per line; blank lines and lines starting with
``#`` are ignored.  All rates are multiples of gamma0, times multiples of
1/gamma0.  Recognised keys and defaults::

    mode          trace | sweep          (sweep if ``axis`` is given)
    lambda        0.05                   spectral width, > 0
    omega         0                      Rabi frequency, >= 0
    delta_drive   0                      drive detuning, >= 0
    delta_cavity  0                      qubit-reservoir detuning
    theta         pi/2                   probe polar angle in [0, pi]
    phi           pi/4                   probe phase in [0, 2 pi)
    t_max         50                     end of the time grid, > 0
    points        2001                   time-grid points, >= 2
    method        analytic | volterra    amplitude backend
    axis          omega | lambda | delta_drive | delta_cavity | time
    from, to      sweep range
    sweep_points  sweep points, >= 1 (from == to when 1)
    at_time       snapshot time for sweeps (default t_max)
    format        csv | json
    out           output path, ``-`` for stdout
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ConfigError
from .model import ModelParams, ProbeState

AXES = ("omega", "lambda", "delta_drive", "delta_cavity", "time")
FORMATS = ("csv", "json")
METHODS = ("analytic", "volterra")

PARAM_FIELDS = {
    "lambda": "lam",
    "omega": "omega",
    "delta_drive": "delta_drive",
    "delta_cavity": "delta_cavity",
}
_SWEEP_KEYS = ("axis", "from", "to", "sweep_points", "at_time")
KEYS = (
    "mode",
    "lambda",
    "omega",
    "delta_drive",
    "delta_cavity",
    "theta",
    "phi",
    "t_max",
    "points",
    "method",
    *_SWEEP_KEYS,
    "format",
    "out",
)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    probe: ProbeState = field(default_factory=ProbeState)
    t_max: float = 50.0
    n_points: int = 2001
    sweep: SweepSpec | None = None
    snapshot_time: float | None = None
    out: str = "-"
    format: str = "csv"
    method: str = "analytic"

    @property
    def mode(self) -> str:
        return "trace" if self.sweep is None else "sweep"

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_points)

    @property
    def time_step(self) -> float:
        return self.t_max / (self.n_points - 1)


def split_lines(text: str) -> dict[str, str]:
    """Parse ``key = value`` text into a raw string mapping."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {stripped!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        if key in raw:
            raise ConfigError(key, "given more than once")
        raw[key] = value
    return raw


def _float(raw: Mapping[str, str], key: str, default: float) -> float:
    if key not in raw:
        return default
    try:
        value = float(raw[key])
    except ValueError:
        raise ConfigError(key, f"must be a number, got {raw[key]!r}") from None
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return value


def _int(raw: Mapping[str, str], key: str, default: int) -> int:
    if key not in raw:
        return default
    try:
        return int(raw[key])
    except ValueError:
        raise ConfigError(key, f"must be an integer, got {raw[key]!r}") from None


def _choice(raw: Mapping[str, str], key: str, options, default: str) -> str:
    value = raw.get(key, default)
    if value not in options:
        raise ConfigError(key, f"must be one of {', '.join(options)}, got {value!r}")
    return value


def _params(values: Mapping[str, float]) -> ModelParams:
    try:
        return ModelParams(**{PARAM_FIELDS[k]: v for k, v in values.items()})
    except ValueError as exc:
        key = str(exc).split()[0]
        raise ConfigError(key, str(exc)) from None


def config_from_mapping(raw: Mapping[str, str]) -> RunConfig:
    """Validate a raw key-value mapping and build a :class:`RunConfig`."""
    for key in raw:
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
    defaults = RunConfig()
    p = defaults.params
    param_values = {
        "lambda": _float(raw, "lambda", p.lam),
        "omega": _float(raw, "omega", p.omega),
        "delta_drive": _float(raw, "delta_drive", p.delta_drive),
        "delta_cavity": _float(raw, "delta_cavity", p.delta_cavity),
    }
    params = _params(param_values)

    theta = _float(raw, "theta", defaults.probe.theta)
    phi = _float(raw, "phi", defaults.probe.phi)
    if not 0 <= theta <= math.pi:
        raise ConfigError("theta", "must lie in [0, pi]")
    if not 0 <= phi < 2 * math.pi:
        raise ConfigError("phi", "must lie in [0, 2*pi)")
    probe = ProbeState(theta, phi)

    t_max = _float(raw, "t_max", defaults.t_max)
    if not t_max > 0:
        raise ConfigError("t_max", "must be > 0")
    n_points = _int(raw, "points", defaults.n_points)
    if n_points < 2:
        raise ConfigError("points", "must be >= 2")
    method = _choice(raw, "method", METHODS, defaults.method)
    fmt = _choice(raw, "format", FORMATS, defaults.format)
    out = raw.get("out", defaults.out)
    if not out:
        raise ConfigError("out", "must not be empty")

    mode = _choice(raw, "mode", ("trace", "sweep"), "sweep" if "axis" in raw else "trace")
    sweep = None
    snapshot = None
    if mode == "trace":
        extra = [k for k in _SWEEP_KEYS if k in raw]
        if extra:
            raise ConfigError(extra[0], "only valid in sweep mode")
    else:
        if "axis" not in raw:
            raise ConfigError("axis", "required in sweep mode")
        axis = _choice(raw, "axis", AXES, "")
        for key in ("from", "to"):
            if key not in raw:
                raise ConfigError(key, "required in sweep mode")
        start = _float(raw, "from", 0.0)
        stop = _float(raw, "to", 0.0)
        count = _int(raw, "sweep_points", 101)
        if count < 1:
            raise ConfigError("sweep_points", "must be >= 1")
        if count == 1 and start != stop:
            raise ConfigError("sweep_points", "a single-point sweep needs from == to")
        sweep = SweepSpec(axis, start, stop, count)
        if axis == "time":
            if "at_time" in raw:
                raise ConfigError("at_time", "not used with axis = time")
            if min(start, stop) < 0:
                raise ConfigError("from", "times must be >= 0")
        else:
            snapshot = _float(raw, "at_time", t_max)
            if snapshot < 0:
                raise ConfigError("at_time", "must be >= 0")
            for key, end in (("from", start), ("to", stop)):
                try:
                    _params({**param_values, axis: end})
                except ConfigError as exc:
                    raise ConfigError(key, f"sweep endpoint invalid: {exc.constraint}") from None

    return RunConfig(
        params=params,
        probe=probe,
        t_max=t_max,
        n_points=n_points,
        sweep=sweep,
        snapshot_time=snapshot,
        out=out,
        format=fmt,
        method=method,
    )


def parse_config(text: str) -> RunConfig:
    return config_from_mapping(split_lines(text))


def config_items(config: RunConfig) -> list[tuple[str, str]]:
    """Ordered key-value pairs that reproduce ``config`` when parsed."""
    p = config.params
    items = [
        ("mode", config.mode),
        ("lambda", repr(p.lam)),
        ("omega", repr(p.omega)),
        ("delta_drive", repr(p.delta_drive)),
        ("delta_cavity", repr(p.delta_cavity)),
        ("theta", repr(config.probe.theta)),
        ("phi", repr(config.probe.phi)),
        ("t_max", repr(config.t_max)),
        ("points", str(config.n_points)),
        ("method", config.method),
    ]
    if config.sweep is not None:
        s = config.sweep
        items += [
            ("axis", s.axis),
            ("from", repr(s.start)),
            ("to", repr(s.stop)),
            ("sweep_points", str(s.points)),
        ]
        if config.snapshot_time is not None:
            items.append(("at_time", repr(config.snapshot_time)))
    items += [("format", config.format), ("out", config.out)]
    return items


def format_config(config: RunConfig) -> str:
    return "".join(f"{key} = {value}\n" for key, value in config_items(config))


def replace_params(config: RunConfig, **changes) -> RunConfig:
    return dataclasses.replace(config, params=dataclasses.replace(config.params, **changes))
