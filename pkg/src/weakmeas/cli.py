"""Command-line front end.

Subcommands
-----------
distribution
    Tabulate per-port distributions plus sum, difference and amplification
    signals for one parameter set, as columnar text.
figure1
    Emit the four-panel amplification-signal data set (one file per panel,
    three theta curves each) at the documented figure defaults.
estimate
    Simulate a shot record and run the maximum-likelihood fit; writes a
    JSON report.
sweep-chi
    Peak magnitude and peak location of |amplification signal| versus chi.

Curve files are UTF-8 text: '#'-prefixed key=value metadata lines followed
by whitespace- (or comma-) separated numeric columns printed with 17
significant digits, which round-trips 64-bit floats exactly.

Exit status: 0 success, 1 runtime or I/O failure (including a fit that did
not converge), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import backend_name
from .estimation import (
    crlb_stderr,
    fisher_information,
    mle_theta,
    sample_shots,
)
from .meter_evolution import InteractionParams
from .signals import PortLabel, difference_signal, general_signal, port_distribution, sum_signal
from .states_and_grids import (
    MeterState,
    MixedMeter,
    MomentumGrid,
    gaussian_meter,
    trapezoid,
)

# Figure-reproduction defaults (documented constants).
FIGURE1_G = 1e-4
FIGURE1_SIGMA = 1.0
FIGURE1_THETAS = (2e-4, 0.0, -2e-4)
FIGURE1_CHIS = (math.pi / 2, 0.5 * math.pi / 2, 0.00007 * math.pi / 2, 0.0)
FIGURE1_PANELS = ("a", "b", "c", "d")

DEFAULT_GRID_SPEC = "-10:10:4001"
CHI_SWEEP_POINTS = 201
# Window for small-phase estimation; excludes the mirror likelihood peak
# near -theta - 2 chi that global search cannot resolve at weak coupling.
SMALL_PHASE_WINDOW = (-math.pi / 4, math.pi / 4)

RNG_NAME = "numpy PCG64"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_grid(spec: str) -> MomentumGrid:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid spec must be p_min:p_max:n, got {spec!r}")
    return MomentumGrid(float(parts[0]), float(parts[1]), int(parts[2]))


def _load_density_file(path: Path) -> MixedMeter:
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 3:
        raise ValueError(f"{path}: expected two columns (p, P_i(p)), >= 3 rows")
    p, density = data[:, 0], data[:, 1]
    spacing = np.diff(p)
    if spacing.size == 0 or not np.all(spacing > 0):
        raise ValueError(f"{path}: p column must be strictly increasing")
    if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=0.0):
        raise ValueError(f"{path}: p column must be uniformly spaced")
    grid = MomentumGrid(float(p[0]), float(p[-1]), p.size)
    if np.any(density < 0) or not np.all(np.isfinite(density)):
        raise ValueError(f"{path}: density must be finite and nonnegative")
    norm = trapezoid(density, grid)
    if not norm > 0:
        raise ValueError(f"{path}: density integrates to zero")
    # tabulated inputs are renormalized by their trapezoid integral
    return MixedMeter(grid, density / norm)


def _build_meter(args) -> MeterState:
    if args.density_file is not None:
        return _load_density_file(Path(args.density_file))
    return gaussian_meter(args.sigma, _parse_grid(args.grid))


def _write_columns(path: Path, header: dict, names: list[str], columns: list[np.ndarray], fmt: str):
    sep = "," if fmt == "csv" else " "
    lines = [f"# {key}={value}" for key, value in header.items()]
    lines.append("# columns=" + ",".join(names))
    for row in zip(*columns):
        lines.append(sep.join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _common_header(args, extra: dict) -> dict:
    header = {"version": __version__}
    header.update(extra)
    return header


def cmd_distribution(args) -> int:
    meter = _build_meter(args)
    grid = meter.grid
    plus = port_distribution(args.theta, args.g, args.chi, PortLabel.PLUS, meter)
    minus = port_distribution(args.theta, args.g, args.chi, PortLabel.MINUS, meter)
    total = sum_signal(args.theta, args.g, args.chi, meter)
    diff = difference_signal(args.theta, args.g, args.chi, meter)
    signal = general_signal(args.theta, args.g, args.chi, meter)
    header = _common_header(
        args,
        {
            "command": "distribution",
            "theta": _fmt(args.theta),
            "g": _fmt(args.g),
            "chi": _fmt(args.chi),
            "meter": args.density_file or f"gaussian sigma={_fmt(args.sigma)}",
            "p_min": _fmt(grid.p_min),
            "p_max": _fmt(grid.p_max),
            "n_points": grid.n_points,
        },
    )
    out = Path(args.out or "distribution.txt")
    _write_columns(
        out,
        header,
        ["p", "pr_plus", "pr_minus", "sum", "diff", "general"],
        [grid.points, plus.values, minus.values, total.values, diff.values, signal.values],
        args.format,
    )
    print(f"wrote {out}")
    return 0


def cmd_figure1(args) -> int:
    grid = _parse_grid(args.grid)
    meter = gaussian_meter(FIGURE1_SIGMA, grid)
    out_dir = Path(args.out or "figure1")
    out_dir.mkdir(parents=True, exist_ok=True)
    for panel, chi in zip(FIGURE1_PANELS, FIGURE1_CHIS):
        curves = [general_signal(theta, FIGURE1_G, chi, meter) for theta in FIGURE1_THETAS]
        header = _common_header(
            args,
            {
                "command": "figure1",
                "panel": panel,
                "chi": _fmt(chi),
                "g": _fmt(FIGURE1_G),
                "sigma": _fmt(FIGURE1_SIGMA),
                "theta_values": ",".join(_fmt(t) for t in FIGURE1_THETAS),
                "p_min": _fmt(grid.p_min),
                "p_max": _fmt(grid.p_max),
                "n_points": grid.n_points,
            },
        )
        _write_columns(
            out_dir / f"figure1_panel_{panel}.txt",
            header,
            ["p", "general_theta_pos", "general_theta_zero", "general_theta_neg"],
            [grid.points] + [c.values for c in curves],
            args.format,
        )
    print(f"wrote 4 panel files to {out_dir}")
    return 0


def cmd_estimate(args) -> int:
    meter = _build_meter(args)
    start = time.perf_counter()
    shots = sample_shots(args.shots, args.theta, args.g, args.chi, meter, args.seed)
    result = mle_theta(shots, args.g, args.chi, search_window=SMALL_PHASE_WINDOW)
    info = fisher_information(result.theta_hat, args.g, args.chi, meter)
    wall = time.perf_counter() - start
    report = {
        "command": "estimate",
        "version": __version__,
        "rng": RNG_NAME,
        "kernel_backend": backend_name(),
        "theta_true": args.theta,
        "g": args.g,
        "chi": args.chi,
        "meter": args.density_file or f"gaussian sigma={args.sigma}",
        "grid": args.grid if args.density_file is None else None,
        "n_shots": args.shots,
        "seed": args.seed,
        "search_window": list(SMALL_PHASE_WINDOW),
        "theta_hat": result.theta_hat,
        "stderr": result.stderr,
        "loglik": result.loglik,
        "converged": result.converged,
        "fisher_information_per_shot": info,
        "crlb_stderr": crlb_stderr(args.shots, info),
        "wall_time_s": wall,
    }
    out = Path(args.out or "estimate.json")
    out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    if not result.converged:
        print("estimate did not converge", file=sys.stderr)
        return 1
    return 0


def cmd_sweep_chi(args) -> int:
    meter = _build_meter(args)
    grid = meter.grid
    chis = np.linspace(0.0, math.pi / 2, CHI_SWEEP_POINTS)
    peak_abs = np.empty(chis.size)
    peak_p = np.empty(chis.size)
    for i, chi in enumerate(chis):
        curve = general_signal(args.theta, args.g, float(chi), meter)
        j = int(np.argmax(np.abs(curve.values)))
        peak_abs[i] = abs(curve.values[j])
        peak_p[i] = grid.points[j]
    header = _common_header(
        args,
        {
            "command": "sweep-chi",
            "theta": _fmt(args.theta),
            "g": _fmt(args.g),
            "meter": args.density_file or f"gaussian sigma={_fmt(args.sigma)}",
            "p_min": _fmt(grid.p_min),
            "p_max": _fmt(grid.p_max),
            "n_points": grid.n_points,
            "chi_points": CHI_SWEEP_POINTS,
        },
    )
    out = Path(args.out or "sweep_chi.txt")
    _write_columns(out, header, ["chi", "peak_abs", "peak_p"], [chis, peak_abs, peak_p], args.format)
    print(f"wrote {out}")
    return 0


def _add_common(parser: argparse.ArgumentParser, *, shots: bool):
    parser.add_argument("--theta", type=float, default=2e-4, help="phase to simulate")
    parser.add_argument("--g", type=float, default=1e-4, help="coupling strength")
    parser.add_argument("--chi", type=float, default=math.pi / 2, help="postselection angle")
    parser.add_argument("--sigma", type=float, default=1.0, help="Gaussian meter width")
    parser.add_argument(
        "--density-file",
        default=None,
        help="two-column text file (p, P_i(p)); overrides --sigma/--grid",
    )
    parser.add_argument(
        "--grid", default=DEFAULT_GRID_SPEC, help="momentum grid as p_min:p_max:n"
    )
    parser.add_argument("--out", default=None, help="output path (directory for figure1)")
    parser.add_argument(
        "--format",
        default=None,
        choices=["txt", "csv", "json"],
        help="txt or csv for curve data (default txt); json for estimate",
    )
    if shots:
        parser.add_argument("--shots", type=int, default=1_000_000, help="number of shots")
        parser.add_argument("--seed", type=int, default=1, help="RNG seed (numpy PCG64)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakmeas",
        description="Two-port postselected weak measurement: distributions, "
        "figure data, and maximum-likelihood phase estimation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, shots in (
        ("distribution", cmd_distribution, False),
        ("figure1", cmd_figure1, False),
        ("estimate", cmd_estimate, True),
        ("sweep-chi", cmd_sweep_chi, False),
    ):
        p = sub.add_parser(name)
        _add_common(p, shots=shots)
        p.set_defaults(fn=fn)
    return parser


def _validate(parser: argparse.ArgumentParser, args):
    try:
        InteractionParams(g=args.g, theta=args.theta)
    except ValueError as exc:
        parser.error(str(exc))
    if args.density_file is not None and not Path(args.density_file).is_file():
        parser.error(f"density file not found: {args.density_file}")
    if getattr(args, "shots", 1) < 1:
        parser.error("--shots must be >= 1")
    if args.command == "estimate":
        if args.format not in (None, "json"):
            parser.error("estimate writes JSON; use --format json or omit it")
        args.format = "json"
    else:
        if args.format == "json":
            parser.error(f"{args.command} emits columnar data; use txt or csv")
        args.format = args.format or "txt"
    try:
        _parse_grid(args.grid)
    except (ValueError, TypeError) as exc:
        parser.error(str(exc))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.fn(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
