"""Figure rendering for experiment artifacts (headless, file output only)."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # report path renders to files; never needs a display

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["read_artifact", "render"]


def read_artifact(csv_path: str | Path) -> tuple[dict, list[dict]]:
    """Read back one experiment CSV: (metadata, rows with floats parsed)."""
    meta = {}
    data_lines = []
    with open(csv_path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                meta[key.strip()] = value.strip()
            else:
                data_lines.append(line)
    rows = []
    for raw in csv.DictReader(data_lines):
        row = {}
        for key, value in raw.items():
            if value is None or value == "":
                row[key] = None
                continue
            try:
                row[key] = float(value)
            except ValueError:
                row[key] = value
        rows.append(row)
    return meta, rows


def _column(rows, key):
    return np.array([math.nan if row.get(key) is None else row[key] for row in rows],
                    dtype=float)


def _semilogy_safe(ax, x, y, **kwargs):
    y = np.asarray(y, dtype=float)
    mask = np.isfinite(y) & (y > 0)
    if mask.any():
        ax.semilogy(np.asarray(x)[mask], y[mask], **kwargs)


def _plot_snr_sweep(rows, meta, ax):
    snr = _column(rows, "snr_db")
    for key, style, label in (
        ("avg_exact", "k-", "analytic (quadrature)"),
        ("avg_approx", "b--", "analytic (closed approx)"),
        ("avg_floor", "r:", "error floor"),
    ):
        _semilogy_safe(ax, snr, _column(rows, key), label=label, **{"linestyle": style[1:], "color": style[0]})
    sim = _column(rows, "avg_sim_ber")
    se = _column(rows, "avg_sim_se")
    mask = np.isfinite(sim) & (sim > 0)
    if mask.any():
        ax.errorbar(snr[mask], sim[mask], yerr=se[mask], fmt="o", color="g",
                    markersize=4, capsize=3, label="simulation")
        ax.set_yscale("log")
    ax.set_xlabel("transmit SNR (dB)")
    ax.set_ylabel("end-to-end BER")
    ax.set_title("End-to-end error rate")


def _plot_pa_grid(rows, meta, ax):
    ok = [r for r in rows if r.get("status") == "ok"]
    alphas = sorted({r["alpha1"] for r in ok})
    betas = sorted({r["beta1"] for r in ok})
    surface = np.full((len(betas), len(alphas)), np.nan)
    lookup = {(r["alpha1"], r["beta1"]): r["avg_e2e"] for r in ok}
    for j, b in enumerate(betas):
        for i, a in enumerate(alphas):
            value = lookup.get((a, b))
            if value is not None and value > 0:
                surface[j, i] = math.log10(value)
    mesh = ax.pcolormesh(alphas, betas, surface, shading="nearest", cmap="viridis")
    plt.colorbar(mesh, ax=ax, label="log10 average e2e BER")
    argmin = meta.get("argmin", "")
    marks = dict(part.split("=") for part in argmin.split() if "=" in part)
    if "alpha1" in marks and "beta1" in marks:
        ax.plot(float(marks["alpha1"]), float(marks["beta1"]), "r*", markersize=14,
                label="argmin")
        ax.legend(loc="lower left")
    ax.set_xlabel("alpha1 (source power share)")
    ax.set_ylabel("beta1 (relay power share)")
    ax.set_title("Power-allocation surface")


def _plot_phase2_study(rows, meta, ax):
    snr = _column(rows, "snr_db")
    _semilogy_safe(ax, snr, _column(rows, "avg_nonequi"), color="k", linestyle="-",
                   label="analytic, derived priori")
    _semilogy_safe(ax, snr, _column(rows, "avg_equi"), color="b", linestyle="--",
                   label="analytic, forced equiprobable")
    sim = _column(rows, "avg_sim_ber")
    se = _column(rows, "avg_sim_se")
    mask = np.isfinite(sim) & (sim > 0)
    if mask.any():
        ax.errorbar(snr[mask], sim[mask], yerr=se[mask], fmt="o", color="g",
                    markersize=4, capsize=3, label="simulation")
        ax.set_yscale("log")
    ax.set_xlabel("transmit SNR (dB)")
    ax.set_ylabel("second-hop BER")
    ax.set_title("Uplink hop: priori sensitivity")


def _plot_table1(rows, meta, ax):
    labels = sorted({row["scenario"] for row in rows})
    for label in labels:
        subset = [row for row in rows if row["scenario"] == label]
        snr = _column(subset, "snr_db")
        ax.plot(snr, _column(subset, "p_a_2nd_analytic"), "-", label=f"{label} analytic")
        ax.errorbar(snr, _column(subset, "p_a_2nd_empirical"),
                    yerr=3.0 * _column(subset, "empirical_se"),
                    fmt="o", markersize=4, capsize=3, label=f"{label} empirical")
    ax.axhline(0.5, color="gray", linewidth=0.8, linestyle=":")
    ax.set_xlabel("transmit SNR (dB)")
    ax.set_ylabel("P(relay symbols agree)")
    ax.set_title("Sign-agreement priori")
    ax.set_ylim(0.45, 0.7)


def _plot_floors(rows, meta, ax):
    snr = _column(rows, "snr_db")
    _semilogy_safe(ax, snr, _column(rows, "x1_floor"), color="r", linestyle=":",
                   label="floor x1")
    _semilogy_safe(ax, snr, _column(rows, "x2_floor"), color="m", linestyle=":",
                   label="floor x2")
    _semilogy_safe(ax, snr, _column(rows, "e2e_floor"), color="k", linestyle="--",
                   label="floor average")
    for key, color, label in (("x1_sim_ber", "g", "sim x1"), ("x2_sim_ber", "b", "sim x2")):
        sim = _column(rows, key)
        mask = np.isfinite(sim) & (sim > 0)
        if mask.any():
            ax.semilogy(snr[mask], sim[mask], "o", color=color, markersize=4, label=label)
    ax.set_xlabel("transmit SNR (dB)")
    ax.set_ylabel("BER")
    ax.set_title("High-SNR floors")


_RENDERERS = {
    "snr-sweep": _plot_snr_sweep,
    "pa-grid": _plot_pa_grid,
    "phase2-study": _plot_phase2_study,
    "table1": _plot_table1,
    "floors": _plot_floors,
}


def render(kind: str, csv_path: str | Path, png_path: str | Path | None = None) -> Path:
    """Render the figure for one experiment CSV next to it; returns PNG path."""
    if kind not in _RENDERERS:
        raise ValueError(f"no renderer for experiment kind {kind!r}")
    csv_path = Path(csv_path)
    if png_path is None:
        png_path = csv_path.with_suffix(".png")
    meta, rows = read_artifact(csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    _RENDERERS[kind](rows, meta, ax)
    if kind != "pa-grid":
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return Path(png_path)
