"""Experiment runner: seeded multi-run campaigns over the benchmark
registry with CSV reporting, plus the territory-fraction sweep.

Reporting conventions:
  * ``runs.csv`` keeps raw per-run errors; re-running the same plan with
    the same base seed reproduces it byte for byte (timestamps live in
    ``meta.json``).
  * ``stats.csv`` zeroes errors below 1e-8 before aggregating and uses
    the sample standard deviation (n-1 denominator).
  * ``boxplot.csv`` floors errors at 1e-8 for log-scale plotting and
    never alters ``runs.csv``.
Run ``r`` of any (function, dimension) cell uses seed ``base_seed + r``,
so every row is independently reproducible from the report.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .. import benchmarks
from ..core import OptimizerConfig, function_error
from ..optimizer import run

log = logging.getLogger(__name__)

ZERO_THRESHOLD = 1e-8
BOXPLOT_FLOOR = 1e-8
DEFAULT_RUNS = 30
DEFAULT_TOLERANCE = 1e-8
DEFAULT_TERRITORY_FRACTION = 0.04

RUNS_HEADER = ["function", "dim", "run", "seed", "error", "evals", "terminated_by"]
STATS_HEADER = ["function", "dim", "runs", "mean", "best", "worst", "std",
                "mean_evals", "solved"]
BOXPLOT_HEADER = ["function", "dim", "run", "error_floored"]


def budget_for_dimension(dim: int) -> int:
    return 10000 * dim


@dataclass
class ExperimentPlan:
    functions: Sequence[str]
    dims: Sequence[int]
    out_dir: Path
    runs: int = DEFAULT_RUNS
    base_seed: int = 0
    max_evals: Optional[int] = None          # None: 10000 * dim
    tolerance: float = DEFAULT_TOLERANCE
    territory_fraction: float = DEFAULT_TERRITORY_FRACTION
    jobs: Optional[int] = None
    plots: bool = True
    traces: bool = False


@dataclass
class RunRow:
    function: str
    dim: int
    run: int
    seed: int
    error: float
    evals: int
    terminated_by: str
    trace: Optional[list] = field(default=None, repr=False)


@dataclass
class StatRow:
    function: str
    dim: int
    runs: int
    mean: float
    best: float
    worst: float
    std: float
    mean_evals: float
    solved: int


def _execute(task) -> RunRow:
    (function, dim, run_idx, seed, max_evals, tolerance, fraction, want_trace) = task
    objective, space = benchmarks.make(function, dim)
    config = OptimizerConfig.for_dimension(
        dim, seed=seed,
        max_evals=budget_for_dimension(dim) if max_evals is None else max_evals,
        territory_fraction=fraction, target_tolerance=tolerance)
    record = run(objective, space, config)
    return RunRow(
        function=function, dim=dim, run=run_idx, seed=seed,
        error=function_error(record.best_value, objective.known_optimum),
        evals=record.evals_used,
        terminated_by=record.terminated_by.value,
        trace=record.trace if want_trace else None,
    )


def _run_tasks(tasks, jobs: Optional[int]) -> list:
    jobs = os.cpu_count() or 1 if jobs is None else max(1, int(jobs))
    if jobs == 1 or len(tasks) <= 1:
        return [_execute(t) for t in tasks]
    chunk = max(1, len(tasks) // (8 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_execute, tasks, chunksize=chunk))


def zeroed(error: float) -> float:
    """Errors below the solved threshold count as exactly zero."""
    return 0.0 if error < ZERO_THRESHOLD else error


def aggregate(rows: Sequence[RunRow]) -> list:
    """Per-(function, dim) indicator rows, zero convention applied first."""
    groups: dict = {}
    for row in rows:
        groups.setdefault((row.function, row.dim), []).append(row)
    stats = []
    for (function, dim) in sorted(groups):
        cell = sorted(groups[(function, dim)], key=lambda r: r.run)
        errors = [zeroed(r.error) for r in cell]
        n = len(errors)
        mean = math.fsum(errors) / n
        std = (math.sqrt(math.fsum((e - mean) ** 2 for e in errors) / (n - 1))
               if n > 1 else 0.0)
        stats.append(StatRow(
            function=function, dim=dim, runs=n,
            mean=mean, best=min(errors), worst=max(errors), std=std,
            mean_evals=math.fsum(r.evals for r in cell) / n,
            solved=sum(1 for r in cell if r.error < ZERO_THRESHOLD),
        ))
    return stats


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_meta(path: Path, payload: dict) -> None:
    payload = dict(payload)
    payload["created"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=str)
        fh.write("\n")


def run_experiment(plan: ExperimentPlan) -> list:
    """Execute the plan, write the report files, return the stat rows."""
    out = Path(plan.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    functions = [benchmarks.get(name).name for name in plan.functions]
    if not functions or not plan.dims:
        log.warning("experiment plan is empty; writing header-only reports")
    tasks = [(f, d, r, plan.base_seed + r, plan.max_evals, plan.tolerance,
              plan.territory_fraction, plan.traces)
             for f in functions for d in plan.dims for r in range(plan.runs)]
    rows = _run_tasks(tasks, plan.jobs)
    rows.sort(key=lambda r: (r.function, r.dim, r.run))

    _write_csv(out / "runs.csv", RUNS_HEADER,
               [[r.function, r.dim, r.run, r.seed, r.error, r.evals, r.terminated_by]
                for r in rows])
    stats = aggregate(rows)
    _write_csv(out / "stats.csv", STATS_HEADER,
               [[s.function, s.dim, s.runs, s.mean, s.best, s.worst, s.std,
                 s.mean_evals, s.solved] for s in stats])
    _write_csv(out / "boxplot.csv", BOXPLOT_HEADER,
               [[r.function, r.dim, r.run, max(r.error, BOXPLOT_FLOOR)] for r in rows])
    _write_meta(out / "meta.json", {
        "kind": "experiment",
        "functions": functions,
        "dims": list(plan.dims),
        "runs": plan.runs,
        "base_seed": plan.base_seed,
        "max_evals": plan.max_evals,
        "tolerance": plan.tolerance,
        "territory_fraction": plan.territory_fraction,
        "zero_threshold": ZERO_THRESHOLD,
        "boxplot_floor": BOXPLOT_FLOOR,
        "std": "sample standard deviation (ddof=1) of zeroed errors",
    })
    if plan.traces:
        trace_dir = out / "traces"
        trace_dir.mkdir(exist_ok=True)
        for r in rows:
            _write_csv(trace_dir / f"{r.function}_D{r.dim}_run{r.run}.csv",
                       ["eval", "best_so_far"], r.trace or [])
    if plan.plots and rows:
        from . import plots
        plots.save_error_boxplots(rows, out)
    return stats


def rho_sweep(values: Sequence[float], *, out_dir, runs: int = 20, dim: int = 5,
              functions: Optional[Sequence[str]] = None, base_seed: int = 0,
              max_evals: Optional[int] = None, tolerance: float = DEFAULT_TOLERANCE,
              jobs: Optional[int] = None, plots: bool = True) -> tuple:
    """Mean raw error per function for each territory fraction, plus the
    cross-function average with the best fraction flagged.

    Writes ``rho_sweep.csv`` (per-function means) and ``rho_summary.csv``
    (averages, ``selected`` marking the argmin).
    """
    for value in values:
        if not 0.0 < value < 1.0:
            raise ValueError(f"territory fraction {value} outside (0, 1)")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    functions = benchmarks.names() if functions is None else \
        [benchmarks.get(name).name for name in functions]
    tasks = [(f, dim, r, base_seed + r, max_evals, tolerance, rho, False)
             for rho in values for f in functions for r in range(runs)]
    rows = _run_tasks(tasks, jobs)

    per_fn: dict = {}
    for task, row in zip(tasks, rows):
        rho = task[6]
        per_fn.setdefault((rho, row.function), []).append(row.error)
    sweep_rows = [(rho, function, dim, len(errs), math.fsum(errs) / len(errs))
                  for (rho, function), errs in sorted(per_fn.items())]

    averages = {}
    for rho, _function, _dim, _n, mean in sweep_rows:
        averages.setdefault(rho, []).append(mean)
    summary = [(rho, math.fsum(means) / len(means)) for rho, means in sorted(averages.items())]
    best_rho = min(summary, key=lambda t: t[1])[0] if summary else None
    summary_rows = [(rho, avg, int(rho == best_rho)) for rho, avg in summary]

    _write_csv(out / "rho_sweep.csv",
               ["rho", "function", "dim", "runs", "mean_error"], sweep_rows)
    _write_csv(out / "rho_summary.csv",
               ["rho", "average_error", "selected"], summary_rows)
    _write_meta(out / "meta.json", {
        "kind": "rho-sweep", "values": list(values), "functions": functions,
        "dim": dim, "runs": runs, "base_seed": base_seed,
        "selected_rho": best_rho,
    })
    if plots and summary_rows:
        from . import plots as plotmod
        plotmod.save_rho_curve(summary_rows, out / "rho_sweep.png")
    return sweep_rows, summary_rows
