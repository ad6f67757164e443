"""Command-line front end.

Exit status: 0 on success, 2 for configuration errors, 3 when a numerical
accuracy check fails, 4 when the output cannot be written.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .config import AXES, FORMATS, METHODS, config_from_mapping, split_lines
from .errors import AccuracyError, ConfigError
from .sweep import FIGURES, run_figure, run_sweep, run_trace

EXIT_CONFIG = 2
EXIT_ACCURACY = 3
EXIT_IO = 4

# (flag dest, config key)
_COMMON = [
    ("lam", "lambda"),
    ("omega", "omega"),
    ("delta_drive", "delta_drive"),
    ("delta_cavity", "delta_cavity"),
    ("theta", "theta"),
    ("phi", "phi"),
    ("t_max", "t_max"),
    ("method", "method"),
    ("format", "format"),
    ("out", "out"),
]


def _add_model_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="key-value configuration file")
    p.add_argument("--lambda", dest="lam", help="spectral width (units of gamma0)")
    p.add_argument("--omega", help="Rabi frequency")
    p.add_argument("--delta-drive", help="drive detuning Delta >= 0")
    p.add_argument("--delta-cavity", help="qubit-reservoir detuning delta")
    p.add_argument("--theta", help="probe polar angle")
    p.add_argument("--phi", help="probe phase")
    p.add_argument("--t-max", help="end of the time grid (units of 1/gamma0)")
    p.add_argument("--method", choices=METHODS, help="amplitude backend")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out", help="output path ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivenqfi",
        description="QFI of a driven qubit in a Lorentzian reservoir.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    trace = sub.add_parser("trace", help="F_phi and Bloch vector along a time grid")
    _add_model_flags(trace)
    trace.add_argument("--points", help="number of time-grid points")

    sweep = sub.add_parser("sweep", help="F_phi at a fixed time along one parameter axis")
    _add_model_flags(sweep)
    sweep.add_argument("--axis", choices=AXES)
    sweep.add_argument("--from", dest="start")
    sweep.add_argument("--to", dest="stop")
    sweep.add_argument("--points", dest="sweep_points", help="number of sweep points")
    sweep.add_argument("--at-time", help="snapshot time (default t_max)")
    sweep.add_argument(
        "--time-points", help="time-grid points setting the volterra step (default 2001)"
    )

    fig = sub.add_parser("figure", help="regenerate the data behind a figure")
    fig.add_argument("figure", choices=FIGURES)
    fig.add_argument("--out", default="-")
    fig.add_argument("--format", choices=FORMATS, default="csv")
    fig.add_argument("--method", choices=METHODS, default="analytic")
    fig.add_argument("--phi", type=float, default=math.pi / 4, help="probe phase (default pi/4)")
    return parser


def _mapping(args) -> dict[str, str]:
    raw = split_lines(args.config.read_text(encoding="utf-8")) if args.config else {}
    overrides = list(_COMMON)
    if args.command == "trace":
        overrides.append(("points", "points"))
        raw.setdefault("mode", "trace")
    else:
        overrides += [
            ("axis", "axis"),
            ("start", "from"),
            ("stop", "to"),
            ("sweep_points", "sweep_points"),
            ("at_time", "at_time"),
            ("time_points", "points"),
        ]
        raw["mode"] = "sweep"
    for dest, key in overrides:
        value = getattr(args, dest, None)
        if value is not None:
            raw[key] = str(value)
    if args.command == "trace" and raw.get("mode") != "trace":
        raise ConfigError("mode", "the trace command needs mode = trace")
    return raw


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figure":
            if not 0 <= args.phi < 2 * math.pi:
                raise ConfigError("phi", "must lie in [0, 2*pi)")
            data = run_figure(args.figure, phi=args.phi, method=args.method)
            fmt, out = args.format, args.out
        else:
            config = config_from_mapping(_mapping(args))
            data = run_trace(config) if args.command == "trace" else run_sweep(config)
            fmt, out = config.format, config.out
        _write(data.render(fmt), out)
    except ConfigError as exc:
        print(f"drivenqfi: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AccuracyError as exc:
        print(f"drivenqfi: accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except OSError as exc:
        print(f"drivenqfi: cannot read or write: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
