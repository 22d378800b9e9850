"""Command-line front end.

Subcommands: simulate | adiabaticity-scan | bloch-map | optimize-q |
reproduce-figure. Configuration comes from a JSON file (--config); outputs go
to --output-dir, the DFSCONTROL_OUTPUT_DIR environment variable, or ./results.

Exit codes: 0 success, 2 invalid configuration, 3 integration failure,
4 unknown figure id.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, IntegrationDivergedError, UnknownFigureError
from . import experiments

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3
EXIT_UNKNOWN_FIGURE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfscontrol",
        description="Adiabatic dark-state control in a collective atom-cavity system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="path to a JSON run configuration")
        p.add_argument("--output-dir", default=None,
                       help=f"output directory (default: ${experiments.OUTPUT_DIR_ENV} or ./results)")
        p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
        p.add_argument("--dt", type=float, default=None, help="override the integrator step")

    add_common(sub.add_parser("simulate", help="integrate trajectories for a run config"))
    add_common(sub.add_parser("adiabaticity-scan", help="scan xi_k over a mu grid"))
    add_common(sub.add_parser("bloch-map", help="overlap map of an eigenstate on the Bloch sphere"))
    add_common(sub.add_parser("optimize-q", help="grid scan of the quench strength"))
    fig = sub.add_parser("reproduce-figure", help="emit the dataset behind a bundled figure")
    fig.add_argument("--figure", required=True, help="figure id (3-8)")
    add_common(fig, needs_config=False)
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except FileNotFoundError:
        raise ConfigError({"config": f"file not found: {path}"})
    except json.JSONDecodeError as exc:
        raise ConfigError({"config": f"invalid JSON: {exc}"})
    if not isinstance(raw, dict):
        raise ConfigError({"config": "top level must be a JSON object"})
    return raw


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    outdir = experiments.default_output_dir(args.output_dir)

    try:
        if args.command == "simulate":
            raw = _load_config(args.config)
            if args.dt is not None:
                raw["dt"] = args.dt
            runs = [experiments.parse_run_config(d) for d in experiments.expand_sweep(raw)]
            summaries = experiments.run_simulations(runs, outdir, jobs=args.jobs)
            for s in summaries:
                print(f"{s['label']}: F={s['final_fidelity']:.6f} "
                      f"P={s['final_purity']:.6f} -> {outdir}")
        elif args.command == "adiabaticity-scan":
            raw = _load_config(args.config)
            s = experiments.run_adiabaticity_scan(raw, outdir)
            print(f"{s['label']}: {len(s['config']['mu_grid'])} points -> {outdir}")
        elif args.command == "bloch-map":
            raw = _load_config(args.config)
            s = experiments.run_bloch_map(raw, outdir)
            print(f"{s['label']} -> {outdir}")
        elif args.command == "optimize-q":
            raw = _load_config(args.config)
            if args.dt is not None:
                raw["dt"] = args.dt
            s = experiments.run_optimize_q(raw, outdir, jobs=args.jobs)
            print(f"{s['label']}: best q/N = {s['q_best_over_n']:.4f} -> {outdir}")
        elif args.command == "reproduce-figure":
            try:
                figure_id = int(args.figure)
            except ValueError:
                raise UnknownFigureError(f"figure id must be an integer, got {args.figure!r}")
            summaries = experiments.reproduce_figure(
                figure_id, outdir, jobs=args.jobs, dt=args.dt
            )
            print(f"figure {figure_id}: wrote {len(summaries)} datasets -> "
                  f"{outdir / f'fig{figure_id}'}")
    except ConfigError as exc:
        for field, message in sorted(exc.field_errors.items()):
            print(f"config error: {field}: {message}", file=sys.stderr)
        return EXIT_CONFIG
    except UnknownFigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_FIGURE
    except IntegrationDivergedError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
