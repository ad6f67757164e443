"""Trace, sweep and figure-preset runners with deterministic output."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import config as cfg
from .amplitude import xi_analytic, xi_volterra
from .config import RunConfig, SweepSpec
from .dynamics import reduced_state
from .model import ModelParams, ProbeState
from .qfi import qfi_bloch, qfi_timeseries
from .quasimode import effective_detuning

TRACE_COLUMNS = ("t", "F_phi", "abs_xi", "W_x", "W_y", "W_z", "purity")
SWEEP_COLUMNS = ("axis", "axis_value", "F_phi", "delta_eff", "abs_xi")
FIGURES = ("fig1a", "fig1b", "fig2", "fig3", "fig4", "fig5b")


@dataclass
class Dataset:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    metadata: list[tuple[str, str]] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = [f"# {key}={value}" for key, value in self.metadata]
        lines.append(",".join(self.columns))
        lines.extend(",".join(_cell(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "metadata": dict(self.metadata),
            "columns": list(self.columns),
            "rows": [[_json_cell(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, indent=1) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _json_cell(value):
    if value is None or isinstance(value, str):
        return value
    return float(value)


def _xi_at(params: ModelParams, t: float, method: str, step: float) -> complex:
    if method == "analytic":
        return xi_analytic(params, t)
    if t == 0:
        return 1.0 + 0.0j
    n = max(2, int(math.ceil(t / step - 1e-9)) + 1)
    return complex(xi_volterra(params, np.linspace(0.0, t, n)).values[-1])


def trace_rows(config: RunConfig) -> list[tuple]:
    series = qfi_timeseries(config.params, config.probe, config.grid(), method=config.method)
    return [
        (t, f, a, w[0], w[1], w[2], p)
        for t, f, a, w, p in zip(
            series.grid, series.f_phi, series.abs_xi, series.w, series.purity
        )
    ]


def sweep_rows(config: RunConfig) -> list[tuple]:
    spec = config.sweep
    if spec is None:
        raise ValueError("configuration is not in sweep mode")
    rows = []
    for value in spec.values():
        value = float(value)
        if spec.axis == "time":
            params, t = config.params, value
        else:
            params = dataclasses.replace(config.params, **{cfg.PARAM_FIELDS[spec.axis]: value})
            t = config.snapshot_time
        xi = _xi_at(params, t, config.method, config.time_step)
        state = reduced_state(params, config.probe, xi)
        rows.append(
            (
                spec.axis,
                value,
                qfi_bloch(state.w, state.dw_dphi),
                effective_detuning(params.omega, params.delta_drive, params.delta_cavity),
                abs(xi),
            )
        )
    return rows


def run_trace(config: RunConfig) -> Dataset:
    if config.mode != "trace":
        raise ValueError("configuration is not in trace mode")
    return Dataset(TRACE_COLUMNS, trace_rows(config), cfg.config_items(config))


def run_sweep(config: RunConfig) -> Dataset:
    return Dataset(SWEEP_COLUMNS, sweep_rows(config), cfg.config_items(config))


def _label(name: str, value: float) -> str:
    return f"{name}={value:g}"


def figure_configs(
    fig_id: str, *, phi: float = math.pi / 4, method: str = "analytic"
) -> list[tuple[str, RunConfig]]:
    """Expand a figure preset into labelled run configurations.

    ``fig5b`` involves no dynamics; its configurations only carry the
    parameters and sweep axis for the effective detuning.
    """
    probe = ProbeState(theta=math.pi / 2, phi=phi)

    def trace(lam, omega, **kw):
        return RunConfig(ModelParams(lam, omega, **kw), probe, method=method)

    def sweep(params, axis, start, stop, points, at_time=50.0):
        return RunConfig(
            params,
            probe,
            sweep=SweepSpec(axis, start, stop, points),
            snapshot_time=None if axis == "time" else at_time,
            method=method,
        )

    fig1_omegas = (0.0, 0.3, 0.5, 1.0)
    if fig_id == "fig1a":
        return [(_label("omega", o), trace(10.0, o)) for o in fig1_omegas]
    if fig_id == "fig1b":
        return [(_label("omega", o), trace(0.05, o)) for o in fig1_omegas]
    if fig_id == "fig2":
        return [
            (_label("lambda", lam), sweep(ModelParams(lam), "omega", 0.0, 10.0, 101))
            for lam in (0.05, 0.1, 0.5, 5.0)
        ]
    if fig_id == "fig3":
        return [
            (_label("omega", o), sweep(ModelParams(0.1, o), "delta_drive", 0.0, 10.0, 41))
            for o in np.linspace(0.0, 10.0, 21)
        ]
    if fig_id == "fig4":
        base = ModelParams(0.1, 1.0, delta_drive=1.0)
        return [
            (_label("t", t), sweep(base, "delta_cavity", -4.0, 4.0, 81, at_time=float(t)))
            for t in np.linspace(0.0, 50.0, 51)
        ]
    if fig_id == "fig5b":
        return [
            ("omega-axis", sweep(ModelParams(), "omega", 0.0, 5.0, 51)),
            ("delta_drive-axis", sweep(ModelParams(omega=1.0), "delta_drive", 0.0, 5.0, 51)),
            (
                "delta_cavity-axis",
                sweep(ModelParams(omega=1.0, delta_drive=1.0), "delta_cavity", -5.0, 5.0, 101),
            ),
        ]
    raise ValueError(f"unknown figure {fig_id!r}; expected one of {', '.join(FIGURES)}")


def _detuning_rows(config: RunConfig) -> list[tuple]:
    spec = config.sweep
    rows = []
    for value in spec.values():
        params = dataclasses.replace(config.params, **{cfg.PARAM_FIELDS[spec.axis]: float(value)})
        d = effective_detuning(params.omega, params.delta_drive, params.delta_cavity)
        rows.append((spec.axis, float(value), None, d, None))
    return rows


def _one_line(config: RunConfig) -> str:
    skip = {"format", "out", "theta", "phi", "method"}
    return "; ".join(f"{k}={v}" for k, v in cfg.config_items(config) if k not in skip)


def run_figure(fig_id: str, *, phi: float = math.pi / 4, method: str = "analytic") -> Dataset:
    curves = figure_configs(fig_id, phi=phi, method=method)
    metadata = [
        ("figure", fig_id),
        ("theta", repr(math.pi / 2)),
        ("phi", repr(phi)),
        ("method", method),
    ]
    metadata += [(f"curve[{label}]", _one_line(c)) for label, c in curves]
    trace_mode = curves[0][1].mode == "trace"
    columns = ("curve",) + (TRACE_COLUMNS if trace_mode else SWEEP_COLUMNS)
    rows = []
    for label, c in curves:
        if fig_id == "fig5b":
            body = _detuning_rows(c)
        elif trace_mode:
            body = trace_rows(c)
        else:
            body = sweep_rows(c)
        rows.extend((label, *row) for row in body)
    return Dataset(columns, rows, metadata)
