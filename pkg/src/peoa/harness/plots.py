"""Figure rendering for experiment reports.

Figures are derived views of the CSV data: error boxplots use the same
1e-8 floor as ``boxplot.csv`` and a log scale, matching the reporting
convention for solved runs.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .experiment import BOXPLOT_FLOOR  # noqa: E402


def save_error_boxplots(rows, out_dir) -> list:
    """One boxplot figure per dimension: floored per-run errors grouped
    by function. Returns the written paths."""
    out_dir = Path(out_dir)
    by_dim: dict = {}
    for row in rows:
        by_dim.setdefault(row.dim, {}).setdefault(row.function, []).append(
            max(row.error, BOXPLOT_FLOOR))
    paths = []
    for dim in sorted(by_dim):
        groups = by_dim[dim]
        names = sorted(groups)
        fig, ax = plt.subplots(figsize=(max(6.0, 0.6 * len(names) + 2.0), 4.5))
        ax.boxplot([groups[name] for name in names], tick_labels=names)
        ax.set_yscale("log")
        ax.axhline(BOXPLOT_FLOOR, color="gray", linewidth=0.8, linestyle="--")
        ax.set_ylabel("function value error (floored at 1e-8)")
        ax.set_title(f"Error distribution per function, D={dim}")
        ax.tick_params(axis="x", rotation=75)
        fig.tight_layout()
        path = out_dir / f"boxplot_D{dim}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def save_rho_curve(summary_rows, path) -> Path:
    """Cross-function average error versus territory fraction."""
    path = Path(path)
    rhos = [row[0] for row in summary_rows]
    averages = [row[1] for row in summary_rows]
    selected = [row[0] for row in summary_rows if row[2]]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(rhos, averages, marker="o")
    if selected:
        best = selected[0]
        ax.axvline(best, color="green", linewidth=0.8, linestyle="--",
                   label=f"best: {best:g}")
        ax.legend()
    ax.set_yscale("log")
    ax.set_xlabel("territory fraction")
    ax.set_ylabel("average error over functions")
    ax.set_title("Territory-fraction sweep")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
