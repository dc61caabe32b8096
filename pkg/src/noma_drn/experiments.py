"""Reproducible experiment runners and their CSV artifacts.

Every runner takes an :class:`ExperimentSpec`, computes its rows, and writes
a CSV whose leading ``#`` comment block pins the resolved configuration
(scenario, grid, trials, seed, version).  Nothing time- or host-dependent is
written, so re-running a spec reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (
    combine_second_phase,
    e2e_abep,
    error_floor,
    first_phase_abep,
    second_phase_abep_approx,
    second_phase_terms,
)
from .model import ScenarioConfig, bundled_scenario
from .priori import PrioriProbs, priori_second_phase
from .rayleigh import QuadratureError
from .simlink import SimConfig, simulate

__all__ = [
    "EXPERIMENT_KINDS",
    "ExperimentError",
    "ExperimentSpec",
    "ExperimentSpecError",
    "parse_snr_grid",
    "run_floors",
    "run_pa_grid",
    "run_phase2_study",
    "run_snr_sweep",
    "run_table1",
]

EXPERIMENT_KINDS = ("snr-sweep", "pa-grid", "phase2-study", "table1", "floors")


class ExperimentSpecError(ValueError):
    """Experiment request rejected before any computation ran."""


class ExperimentError(RuntimeError):
    """Every row of an experiment failed; no usable artifact was produced."""


@dataclass(frozen=True)
class ExperimentSpec:
    """Fully-resolved description of one experiment run."""

    kind: str
    scenario: ScenarioConfig | None
    snr_grid: tuple[float, ...]
    trials: int
    seed: int
    out: Path
    workers: int = 1
    grid_step: float = 0.025

    def __post_init__(self):
        problems = []
        if self.kind not in EXPERIMENT_KINDS:
            problems.append(f"kind must be one of {EXPERIMENT_KINDS}, got {self.kind!r}")
        if self.scenario is None and self.kind != "table1":
            problems.append(f"experiment {self.kind!r} requires a scenario")
        grid = tuple(float(v) for v in self.snr_grid)
        if not grid:
            problems.append("SNR grid must not be empty")
        elif any(b <= a for a, b in zip(grid, grid[1:])):
            problems.append(f"SNR grid must be strictly ascending, got {grid}")
        if self.kind == "pa-grid" and len(grid) != 1:
            problems.append("pa-grid runs at a single SNR; pass one grid point")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            problems.append(f"trials must be a positive integer, got {self.trials!r}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            problems.append(f"seed must be a non-negative integer, got {self.seed!r}")
        if not (isinstance(self.workers, int) and self.workers >= 1):
            problems.append(f"workers must be a positive integer, got {self.workers!r}")
        if not 0.0 < self.grid_step <= 0.25:
            problems.append(f"grid_step must lie in (0, 0.25], got {self.grid_step!r}")
        if problems:
            raise ExperimentSpecError("; ".join(problems))
        object.__setattr__(self, "snr_grid", grid)
        object.__setattr__(self, "out", Path(self.out))


def parse_snr_grid(text: str) -> tuple[float, ...]:
    """Parse ``start:stop:step`` (inclusive stop) or a single dB value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return (float(parts[0]),)
        if len(parts) != 3:
            raise ValueError
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ExperimentSpecError(
            f"--snr expects 'start:stop:step' or a single value, got {text!r}"
        ) from None
    if step <= 0 or stop < start:
        raise ExperimentSpecError(
            f"--snr needs stop >= start and step > 0, got {text!r}"
        )
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(start + i * step for i in range(count))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "nan" if math.isnan(value) else format(value, ".10g")
    return str(value)


def _scenario_line(sc: ScenarioConfig) -> str:
    keys = ("alpha1", "beta1", "sigma2_sr1", "sigma2_sr2", "sigma2_r1d",
            "sigma2_r2d", "p_s", "p_r", "n0")
    return " ".join(f"{k}={_fmt(float(getattr(sc, k)))}" for k in keys)


def write_csv(path: Path, meta: dict, fieldnames: list[str], rows: list[dict]) -> Path:
    """Write rows under a ``#`` metadata block; returns the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for key, value in meta.items():
            handle.write(f"# {key}: {value}\n")
        writer = csv.DictWriter(handle, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(row.get(k)) for k in fieldnames})
    return path


def _base_meta(spec: ExperimentSpec) -> dict:
    meta = {"experiment": spec.kind}
    if spec.scenario is not None:
        meta["scenario"] = _scenario_line(spec.scenario)
    meta.update(
        snr_grid_db=",".join(_fmt(v) for v in spec.snr_grid),
        trials=spec.trials,
        seed=spec.seed,
        workers=spec.workers,
        toolkit_version=__version__,
    )
    return meta


def _sim_columns(row: dict, report, prefix_pairs) -> None:
    for prefix, rate in prefix_pairs:
        row[f"{prefix}_ber"] = rate
        row[f"{prefix}_se"] = report.stderr(rate)


SNR_SWEEP_COLUMNS = [
    "snr_db",
    "x1_exact", "x2_exact", "avg_exact",
    "x1_approx", "x2_approx", "avg_approx",
    "x1_floor", "x2_floor", "avg_floor",
    "x1_sim_ber", "x1_sim_se", "x2_sim_ber", "x2_sim_se", "avg_sim_ber", "avg_sim_se",
    "p_a_2nd",
    "status",
]


def run_snr_sweep(spec: ExperimentSpec) -> list[dict]:
    """End-to-end BER versus SNR: exact, approximate, floor and simulated."""
    sc = spec.scenario
    floors = error_floor(sc)
    rows = []
    failures = 0
    for index, snr in enumerate(spec.snr_grid):
        row = {
            "snr_db": snr,
            "x1_floor": floors.floor_x1,
            "x2_floor": floors.floor_x2,
            "avg_floor": floors.floor_e2e,
            "status": "ok",
        }
        try:
            ph1 = first_phase_abep(sc, snr)
            priori = priori_second_phase(sc, snr)
            exact = e2e_abep(ph1, combine_second_phase(second_phase_terms(sc, snr), priori),
                             "exact-quadrature")
            approx = e2e_abep(ph1, second_phase_abep_approx(sc, snr, priori), "closed-approx")
            report = simulate(
                SimConfig(sc, snr, spec.trials, seed=spec.seed + index, workers=spec.workers)
            )
            row.update(
                x1_exact=exact.p1_e2e, x2_exact=exact.p2_e2e, avg_exact=exact.p_e2e,
                x1_approx=approx.p1_e2e, x2_approx=approx.p2_e2e, avg_approx=approx.p_e2e,
                p_a_2nd=priori.p_a_2nd,
            )
            _sim_columns(row, report, [
                ("x1_sim", report.ber_x1_e2e),
                ("x2_sim", report.ber_x2_e2e),
                ("avg_sim", report.ber_e2e_avg),
            ])
        except QuadratureError as exc:
            failures += 1
            row["status"] = f"quadrature-error: {exc.error_estimate:.3g}"
        rows.append(row)
    if failures == len(rows):
        raise ExperimentError("every SNR point failed; no sweep data produced")
    write_csv(spec.out, _base_meta(spec), SNR_SWEEP_COLUMNS, rows)
    return rows


PA_GRID_COLUMNS = ["alpha1", "beta1", "x1_e2e", "x2_e2e", "avg_e2e", "status"]


def _centered_grid(step: float, lo: float, hi: float) -> list[float]:
    # Open interval (lo, hi) sampled at multiples of step.
    values = []
    k = 1
    while True:
        v = round(lo + k * step, 12)
        if v >= hi - 1e-12:
            return values
        values.append(v)
        k += 1


def run_pa_grid(spec: ExperimentSpec, alphas=None, betas=None) -> tuple[list[dict], dict]:
    """Analytic end-to-end BER surface over the two power splits.

    Returns the rows and the argmin summary.  The uplink quadrature terms
    depend only on ``beta1`` and the broadcast terms only on ``alpha1``, so
    each axis is evaluated once and the surface assembled from the product.
    """
    sc = spec.scenario
    snr = spec.snr_grid[0]
    if alphas is None:
        alphas = _centered_grid(spec.grid_step, 0.5, 1.0)
    if betas is None:
        betas = _centered_grid(spec.grid_step, 0.0, 1.0)
    if not alphas or not betas:
        raise ExperimentSpecError("pa-grid needs at least one alpha1 and one beta1 point")

    phase1 = {}
    priori = {}
    for a in alphas:
        sc_a = replace(sc, alpha1=float(a))
        phase1[a] = first_phase_abep(sc_a, snr)
        priori[a] = priori_second_phase(sc_a, snr)

    rows = []
    failures = 0
    best = None
    for b in betas:
        sc_b = replace(sc, beta1=float(b))
        try:
            terms = second_phase_terms(sc_b, snr)
        except QuadratureError as exc:
            failures += len(alphas)
            for a in alphas:
                rows.append({"alpha1": a, "beta1": b,
                             "status": f"quadrature-error: {exc.error_estimate:.3g}"})
            continue
        for a in alphas:
            ph2 = combine_second_phase(terms, priori[a])
            bb = e2e_abep(phase1[a], ph2, "exact-quadrature")
            rows.append({
                "alpha1": a, "beta1": b,
                "x1_e2e": bb.p1_e2e, "x2_e2e": bb.p2_e2e, "avg_e2e": bb.p_e2e,
                "status": "ok",
            })
            if best is None or bb.p_e2e < best["avg_e2e"]:
                best = {"alpha1": a, "beta1": b, "avg_e2e": bb.p_e2e}
    if best is None:
        raise ExperimentError("every grid point failed; no surface produced")
    meta = _base_meta(spec)
    meta["grid_step"] = _fmt(float(spec.grid_step))
    meta["argmin"] = (
        f"alpha1={_fmt(best['alpha1'])} beta1={_fmt(best['beta1'])} "
        f"avg_e2e={_fmt(best['avg_e2e'])}"
    )
    write_csv(spec.out, meta, PA_GRID_COLUMNS, rows)
    return rows, best


PHASE2_COLUMNS = [
    "snr_db",
    "p_a_2nd", "p_a_2nd_emp",
    "x1_nonequi", "x2_nonequi", "avg_nonequi",
    "x1_equi", "x2_equi", "avg_equi",
    "x1_sim_ber", "x1_sim_se", "x2_sim_ber", "x2_sim_se", "avg_sim_ber", "avg_sim_se",
    "status",
]


def run_phase2_study(spec: ExperimentSpec) -> list[dict]:
    """Uplink-hop BER with derived versus forced-equiprobable sign events.

    The simulated columns count destination errors against the forwarded
    relay decisions, i.e. they isolate the second hop of the chain.
    """
    sc = spec.scenario
    rows = []
    failures = 0
    for index, snr in enumerate(spec.snr_grid):
        row = {"snr_db": snr, "status": "ok"}
        try:
            priori = priori_second_phase(sc, snr)
            terms = second_phase_terms(sc, snr)
            derived = combine_second_phase(terms, priori)
            forced = combine_second_phase(terms, PrioriProbs.equiprobable())
            report = simulate(
                SimConfig(sc, snr, spec.trials, seed=spec.seed + index, workers=spec.workers)
            )
            row.update(
                p_a_2nd=priori.p_a_2nd,
                p_a_2nd_emp=report.p_a_2nd_emp,
                x1_nonequi=derived.p_x1, x2_nonequi=derived.p_x2,
                avg_nonequi=0.5 * (derived.p_x1 + derived.p_x2),
                x1_equi=forced.p_x1, x2_equi=forced.p_x2,
                avg_equi=0.5 * (forced.p_x1 + forced.p_x2),
            )
            _sim_columns(row, report, [
                ("x1_sim", report.ber_x1_r1d),
                ("x2_sim", report.ber_x2_r2d),
                ("avg_sim", report.ber_phase2_avg),
            ])
        except QuadratureError as exc:
            failures += 1
            row["status"] = f"quadrature-error: {exc.error_estimate:.3g}"
        rows.append(row)
    if failures == len(rows):
        raise ExperimentError("every SNR point failed; no study data produced")
    write_csv(spec.out, _base_meta(spec), PHASE2_COLUMNS, rows)
    return rows


TABLE1_COLUMNS = [
    "scenario", "snr_db", "p_a_2nd_analytic", "p_a_2nd_empirical", "empirical_se", "trials",
]


def run_table1(spec: ExperimentSpec) -> list[dict]:
    """Sign-agreement priori table: analytic values beside empirical estimates.

    Without an explicit scenario the table covers the two bundled scenarios
    that define it (scenario1 and scenario2) over the requested SNR grid.
    """
    if spec.scenario is not None:
        entries = [("custom", spec.scenario)]
    else:
        entries = [(name, bundled_scenario(name)) for name in ("scenario1", "scenario2")]
    rows = []
    for s_index, (label, sc) in enumerate(entries):
        for index, snr in enumerate(spec.snr_grid):
            priori = priori_second_phase(sc, snr)
            report = simulate(
                SimConfig(sc, snr, spec.trials,
                          seed=spec.seed + 1000 * s_index + index, workers=spec.workers)
            )
            emp = report.p_a_2nd_emp
            rows.append({
                "scenario": label,
                "snr_db": snr,
                "p_a_2nd_analytic": priori.p_a_2nd,
                "p_a_2nd_empirical": emp,
                "empirical_se": report.stderr(emp),
                "trials": spec.trials,
            })
    meta = _base_meta(spec)
    if spec.scenario is None:
        for label, sc in entries:
            meta[f"scenario_{label}"] = _scenario_line(sc)
    write_csv(spec.out, meta, TABLE1_COLUMNS, rows)
    return rows


FLOORS_COLUMNS = [
    "snr_db",
    "x1_floor", "x2_floor", "e2e_floor",
    "x1_sim_ber", "x1_sim_se", "x2_sim_ber", "x2_sim_se", "avg_sim_ber", "avg_sim_se",
]


def run_floors(spec: ExperimentSpec) -> list[dict]:
    """Error-floor overlay: constant floors beside simulated e2e BER."""
    sc = spec.scenario
    floors = error_floor(sc)
    rows = []
    for index, snr in enumerate(spec.snr_grid):
        report = simulate(
            SimConfig(sc, snr, spec.trials, seed=spec.seed + index, workers=spec.workers)
        )
        row = {
            "snr_db": snr,
            "x1_floor": floors.floor_x1,
            "x2_floor": floors.floor_x2,
            "e2e_floor": floors.floor_e2e,
        }
        _sim_columns(row, report, [
            ("x1_sim", report.ber_x1_e2e),
            ("x2_sim", report.ber_x2_e2e),
            ("avg_sim", report.ber_e2e_avg),
        ])
        rows.append(row)
    write_csv(spec.out, _base_meta(spec), FLOORS_COLUMNS, rows)
    return rows
