"""Command line entry point: ``phasetransport {run,sweep,analytic,couplings}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analytics
from .config import PRESETS, ConfigError, RunConfig, SweepSpec, load, parse_number
from .couplings import coupling_matrix, format_profile
from .dynamics import ConfigurationError, NumericalError, Trajectory, propagate

log = logging.getLogger("phasetransport")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value) + 0.0, ".15g")  # + 0.0 turns -0.0 into 0.0
    if value is None:
        return ""
    return str(value)


def write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def trajectory_rows(traj: Trajectory):
    header = ["t", "M", "P_L", "P_R", "phi"] + [f"rho_{n}" for n in range(1, traj.n_sites + 1)]
    rows = (
        [traj.times[i], traj.mean[i], traj.p_left[i], traj.p_right[i], traj.phi[i], *traj.populations[i]]
        for i in range(traj.times.size)
    )
    return header, rows


SUMMARY_HEADER = [
    "t", "M", "P_L", "P_R", "phi", "trace_error", "hermiticity_error",
    "M_closed_form", "phi_closed_form", "v_initial", "p_k_positive_finite",
    "p_k_positive_limit", "long_time_mean",
]


def summary_row(config: RunConfig, traj: Trajectory) -> list:
    report = analytics.analytic_report(config.chain, config.initial)
    final = traj.final()
    t = final["t"]
    return [
        t, final["M"], final["P_L"], final["P_R"], final["phi"],
        traj.max_trace_error, traj.max_hermiticity_error,
        report.mean_at(t), report.phi0 * np.exp(-report.gamma * t), report.v_initial,
        report.p_k_positive_finite, report.p_k_positive_limit,
        "unbounded" if report.long_time_mean is None else report.long_time_mean,
    ]


def _resolve(out_dir: Path, name: str) -> Path:
    path = Path(name)
    return path if path.is_absolute() else out_dir / path


def cmd_run(config: RunConfig, out_dir: Path) -> int:
    traj = propagate(config.chain, config.initial, config.propagation)
    header, rows = trajectory_rows(traj)
    traj_path = _resolve(out_dir, config.trajectory_csv)
    write_csv(traj_path, header, rows)
    summary_path = _resolve(out_dir, config.summary_csv)
    write_csv(summary_path, SUMMARY_HEADER, [summary_row(config, traj)])
    final = traj.final()
    log.info("t=%g  M=%.6f  P_L=%.6f  P_R=%.6f", final["t"], final["M"], final["P_L"], final["P_R"])
    log.info("wrote %s and %s", traj_path, summary_path)
    return EXIT_OK


def sweep_point(config: RunConfig):
    """Evaluate one sweep point; returns (row, None) or (None, error message)."""
    try:
        traj = propagate(config.chain, config.initial, config.propagation)
    except (ConfigurationError, NumericalError, ValueError) as exc:
        return None, f"{type(exc).__name__}: {exc}"
    report = analytics.analytic_report(config.chain, config.initial)
    final = traj.final()
    return [
        final["P_L"], final["M"], report.p_k_positive_limit,
        "unbounded" if report.long_time_mean is None else report.long_time_mean,
    ], None


def run_sweep(sweep: SweepSpec, jobs: int = 1):
    """Evaluate all grid points; results keep grid order whatever ``jobs`` is."""
    configs = [sweep.point(v) for v in sweep.values]
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(sweep_point, configs))
    return [sweep_point(c) for c in configs]


def cmd_sweep(sweep: SweepSpec, out_dir: Path, jobs: int = 1) -> int:
    results = run_sweep(sweep, jobs)
    header = [sweep.parameter, "P_L", "M", "p_k_positive_limit", "long_time_mean"]
    rows, failures = [], []
    for value, (row, error) in zip(sweep.values, results):
        if error is None:
            rows.append([value, *row])
        else:
            failures.append((value, error))
    path = _resolve(out_dir, sweep.summary_csv)
    write_csv(path, header, rows)
    log.info("wrote %d sweep rows to %s", len(rows), path)
    for value, error in failures:
        log.error("%s = %g failed: %s", sweep.parameter, value, error)
    return EXIT_NUMERICAL if failures else EXIT_OK


def cmd_analytic(config: RunConfig, out_dir: Path | None, mean_at=()) -> int:
    report = analytics.analytic_report(config.chain, config.initial)
    if report.p_k is None:
        log.warning("N = %d is odd or < 4: k-space fields omitted", report.n_sites)
    out = sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["quantity", "value"])
    for key, value in report.rows():
        writer.writerow([key, fmt(value)])
    mean_rows = [[t, report.mean_at(t)] for t in mean_at]
    if mean_rows:
        writer.writerow([])
        writer.writerow(["t", "M_closed_form"])
        for row in mean_rows:
            writer.writerow([fmt(v) for v in row])
    if out_dir is not None:
        write_csv(out_dir / "analytic.csv", ["quantity", "value"], report.rows())
        if report.p_k is not None:
            spec = analytics.k_spectrum(report.n_sites, config.chain.epsilon, report.v)
            write_csv(
                out_dir / "analytic_pk.csv",
                ["k", "E_k", "v_k", "P_k"],
                zip(spec.k_values, spec.energies, spec.velocities, report.p_k),
            )
        if mean_rows:
            write_csv(out_dir / "analytic_mean.csv", ["t", "M_closed_form"], mean_rows)
    return EXIT_OK


def cmd_couplings(config: RunConfig, output: Path | None) -> int:
    V = coupling_matrix(config.chain.coupling, config.chain.n_sites, config.chain.boundary)
    text = format_profile(np.diagonal(V, 1))
    if output is None:
        sys.stdout.write(text)
    else:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--config", type=Path, default=default(None), help="config file")
    parser.add_argument("--preset", choices=sorted(PRESETS), default=default(None),
                        help="named figure setup; a config file refines it")
    parser.add_argument("--out-dir", type=Path, default=default(Path(".")), help="output directory")
    parser.add_argument("--jobs", type=int, default=default(1), help="parallel sweep workers")
    parser.add_argument("--set", dest="overrides", action="append", metavar="SECTION.KEY=VALUE",
                        default=default(None), help="override one config value (repeatable)")
    parser.add_argument("-v", "--verbose", action="store_true", default=default(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasetransport",
        description="Phase-directed exciton transport on a dephasing chain.",
    )
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="propagate one configuration and write CSVs")
    _add_common(p, suppress=True)

    p = sub.add_parser("sweep", help="scan theta or gamma")
    _add_common(p, suppress=True)

    p = sub.add_parser("analytic", help="closed-form predictions")
    _add_common(p, suppress=True)
    p.add_argument("--mean-at", type=lambda s: [parse_number(x) for x in s.split(",") if x.strip()],
                   default=[], metavar="T1,T2,...", help="tabulate the closed-form mean at these times")

    p = sub.add_parser("couplings", help="print the nearest-neighbor bonds V_{n,n+1}")
    _add_common(p, suppress=True)
    p.add_argument("-o", "--output", type=Path, default=None, help="write to a file instead of stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config, sweep = load(args.config, args.preset, args.overrides or ())
        if args.command == "run":
            return cmd_run(config, args.out_dir)
        if args.command == "sweep":
            if sweep is None:
                raise ConfigError("sweep needs a [sweep] section (or a sweep preset such as fig2)")
            if args.jobs < 1:
                raise ConfigError("--jobs must be >= 1")
            return cmd_sweep(sweep, args.out_dir, args.jobs)
        if args.command == "analytic":
            out_dir = args.out_dir if args.out_dir != Path(".") else None
            return cmd_analytic(config, out_dir, args.mean_at)
        if args.command == "couplings":
            return cmd_couplings(config, args.output)
    except (ConfigError, ConfigurationError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
