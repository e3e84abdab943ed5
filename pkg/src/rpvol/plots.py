"""Matplotlib rendering of report data, saved as PNG next to the CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

STYLE = {
    "figure.facecolor": "white",
    "axes.grid": True,
    "grid.alpha": 0.3,
    "grid.linewidth": 0.6,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
    "axes.titlesize": 10,
}
DPI = 130
LINE = "#30609c"
ACCENT = "#b3432b"


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_density_qq(dist, title: str, path: str | Path) -> Path:
    """Histogram and normal q-q panel for one series."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, (ax_h, ax_q) = plt.subplots(1, 2, figsize=(8.0, 3.2))
        widths = dist.bin_right - dist.bin_left
        ax_h.bar(dist.bin_left, dist.count, width=widths, align="edge",
                 color=LINE, edgecolor="white", linewidth=0.4)
        ax_h.set_title(f"{title}: density")
        ax_h.set_ylabel("count")
        ax_q.plot(dist.qq_theoretical, dist.qq_empirical, ".", ms=2.5, color=LINE)
        lo = min(dist.qq_theoretical[0], dist.qq_empirical[0])
        hi = max(dist.qq_theoretical[-1], dist.qq_empirical[-1])
        ax_q.plot([lo, hi], [lo, hi], lw=0.9, color=ACCENT)
        ax_q.set_title(f"{title}: normal q-q")
        ax_q.set_xlabel("theoretical quantile")
        ax_q.set_ylabel("empirical quantile")
        _save(fig, path)
    return path


def save_timeseries(days, values, title: str, path: str | Path) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(8.0, 2.8))
        ax.plot(list(days), np.asarray(values, dtype=float), lw=0.7, color=LINE)
        ax.set_title(title)
        fig.autofmt_xdate(rotation=30)
        _save(fig, path)
    return path


def save_acf(result, title: str, path: str | Path) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 2.8))
        ax.bar(result.lags, result.rho, width=0.5, color=LINE)
        ax.axhline(result.band, color=ACCENT, lw=0.9, ls="--")
        ax.axhline(-result.band, color=ACCENT, lw=0.9, ls="--")
        ax.axhline(0.0, color="black", lw=0.6)
        ax.set_title(title)
        ax.set_xlabel("lag (days)")
        ax.set_ylabel("autocorrelation")
        _save(fig, path)
    return path


def save_mincap(rows, path: str | Path) -> Path:
    """Capital fraction vs coverage with CI whiskers, one line per position."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 3.2))
        for position, color in (("long", LINE), ("short", ACCENT)):
            sub = [r for r in rows if r[0] == position]
            if not sub:
                continue
            cov = [r[1] * 100 for r in sub]
            lam = [r[2] for r in sub]
            lo = [r[2] - r[3] for r in sub]
            hi = [r[4] - r[2] for r in sub]
            ax.errorbar(cov, lam, yerr=[lo, hi], marker="o", ms=3.5,
                        lw=1.1, capsize=2.5, color=color, label=position)
        ax.set_xlabel("coverage (%)")
        ax.set_ylabel("capital fraction (% of investment)")
        ax.set_title("minimum capital requirement")
        ax.legend(frameon=False)
        _save(fig, path)
    return path


def save_convergence(report, path: str | Path) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 3.2))
        powers = sorted({c.p for c in report.cells})
        colors = plt.cm.viridis(np.linspace(0.15, 0.8, len(powers)))
        for p, color in zip(powers, colors):
            sub = sorted((c for c in report.cells if c.p == p), key=lambda c: c.m)
            ax.loglog([c.m for c in sub], [c.mare for c in sub],
                      marker="o", ms=3.5, lw=1.1, color=color, label=f"p = {p:g}")
        ax.set_xlabel("intervals per day (m)")
        ax.set_ylabel("mean absolute relative error")
        ax.set_title("estimator error vs sampling frequency")
        ax.legend(frameon=False)
        _save(fig, path)
    return path
