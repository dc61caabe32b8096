"""Command-line entry point.

One subcommand per experiment kind; every run writes a CSV artifact and, by
default, a rendered PNG next to it.  Exit codes: 0 success, 2 invalid
configuration or experiment spec, 3 numeric failure (quadrature or an
experiment whose rows all failed).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .experiments import (
    EXPERIMENT_KINDS,
    ExperimentError,
    ExperimentSpec,
    ExperimentSpecError,
    parse_snr_grid,
    run_floors,
    run_pa_grid,
    run_phase2_study,
    run_snr_sweep,
    run_table1,
)
from .model import (
    ScenarioValidationError,
    bundled_scenario,
    bundled_scenario_names,
    load_scenario,
)
from .rayleigh import QuadratureError

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_CONFIG = 2
_EXIT_NUMERIC = 3

_DEFAULT_SNR = {
    "snr-sweep": "0:40:5",
    "pa-grid": "30",
    "phase2-study": "0:30:2.5",
    "table1": "0:15:5",
    "floors": "40:60:5",
}

_RUNNERS = {
    "snr-sweep": run_snr_sweep,
    "pa-grid": run_pa_grid,
    "phase2-study": run_phase2_study,
    "table1": run_table1,
    "floors": run_floors,
}


def _resolve_scenario(token: str):
    """Accept a bundled scenario name or a path to a YAML file."""
    if token in bundled_scenario_names():
        return bundled_scenario(token)
    path = Path(token)
    if not path.exists():
        raise ScenarioValidationError(
            [f"config {token!r} is neither a bundled scenario "
             f"({', '.join(bundled_scenario_names())}) nor an existing file"]
        )
    return load_scenario(path)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noma-drn",
        description="Error-rate experiments for the two-relay NOMA network.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="kind", required=True, metavar="EXPERIMENT")
    help_text = {
        "snr-sweep": "end-to-end BER vs SNR (analytic, approximate, floor, simulated)",
        "pa-grid": "analytic BER surface over the two power-allocation coefficients",
        "phase2-study": "uplink-hop BER with derived vs forced-equiprobable priori",
        "table1": "sign-agreement priori table, analytic vs empirical",
        "floors": "high-SNR floor overlay against simulation",
    }
    for kind in EXPERIMENT_KINDS:
        p = sub.add_parser(kind, help=help_text[kind])
        p.add_argument(
            "--config",
            metavar="FILE|NAME",
            required=(kind != "table1"),
            help="scenario YAML file or bundled name "
                 f"({', '.join(bundled_scenario_names())})"
                 + ("; optional here, default: scenario1+scenario2" if kind == "table1" else ""),
        )
        p.add_argument("--snr", default=_DEFAULT_SNR[kind], metavar="START:STOP:STEP",
                       help=f"SNR grid in dB (default {_DEFAULT_SNR[kind]})"
                            + ("; single value" if kind == "pa-grid" else ""))
        p.add_argument("--trials", type=int, default=1_000_000,
                       help="Monte Carlo trials per point (default 1e6)")
        p.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
        p.add_argument("--out", type=Path, required=True, metavar="CSV",
                       help="output CSV path; the figure lands next to it")
        p.add_argument("--workers", type=int, default=1,
                       help="simulation worker processes (default 1)")
        p.add_argument("--no-plot", action="store_true",
                       help="skip figure rendering, write only the CSV")
        if kind == "pa-grid":
            p.add_argument("--grid-step", type=float, default=0.025,
                           help="power-allocation grid step (default 0.025)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        scenario = _resolve_scenario(args.config) if args.config else None
        spec = ExperimentSpec(
            kind=args.kind,
            scenario=scenario,
            snr_grid=parse_snr_grid(args.snr),
            trials=args.trials,
            seed=args.seed,
            out=args.out,
            workers=args.workers,
            grid_step=getattr(args, "grid_step", 0.025),
        )
    except (ScenarioValidationError, ExperimentSpecError, OSError) as exc:
        print(f"noma-drn: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    try:
        result = _RUNNERS[args.kind](spec)
    except (ExperimentError, QuadratureError) as exc:
        print(f"noma-drn: numeric failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC
    except OSError as exc:
        print(f"noma-drn: cannot write output: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    if args.kind == "pa-grid":
        _, best = result
        print(f"argmin: alpha1={best['alpha1']} beta1={best['beta1']} "
              f"avg_e2e={best['avg_e2e']:.6g}")
    print(f"wrote {spec.out}")

    if not args.no_plot:
        from . import plotting  # deferred: pulls in matplotlib

        png = plotting.render(args.kind, spec.out)
        print(f"wrote {png}")
    return _EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
