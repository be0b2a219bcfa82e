"""Local phase: build the best eagle's territory and run a budgeted,
bound-constrained, derivative-free descent inside it.

The default minimizer is a coordinate pattern search with parabolic
interpolation steps and shrink-on-failure, plus a Hooke-Jeeves style
pattern move after each sweep. It needs no gradients, respects an exact
evaluation budget, and never returns a point worse than its start. A
different minimizer with the same call signature can be passed to
:func:`local_minimize` to swap the strategy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import Eagle, EvaluationCounter, Objective, evaluate

STEP_TOL_FACTOR = 1e-12
_INITIAL_STEP_FRACTION = 0.1
_PARABOLA_TRUST = 4.0


@dataclass(frozen=True)
class Territory:
    """Box of half-width ``size`` around the best eagle, clipped to the
    search space, with the local search's start point inside it."""

    lower: np.ndarray
    upper: np.ndarray
    size: float
    start: np.ndarray


@dataclass
class LocalResult:
    best_point: np.ndarray
    best_value: float
    evals_consumed: int


def territory(best: Eagle, space, fraction: float,
              start: Optional[np.ndarray] = None) -> Territory:
    """Territory around ``best``: half-width max(fraction * smallest
    bound width, 1), truncated to the search space."""
    if fraction <= 0.0:
        raise ValueError("territory fraction must be positive")
    size = max(fraction * float(np.min(space.widths)), 1.0)
    lower = np.maximum(space.lower, best.position - size)
    upper = np.minimum(space.upper, best.position + size)
    if start is None:
        start = np.array(best.position, dtype=float)
    return Territory(lower=lower, upper=upper, size=size, start=start)


def warm_start_rule(prev_best: Optional[Eagle], prev_result: Optional[LocalResult],
                    current_best: Eagle) -> tuple:
    """Start point (and its cached value) for the next local search.

    When two consecutive generations select the same best eagle (exact
    component equality), the later search continues from the earlier
    search's result instead of restarting at the eagle itself.
    """
    if (prev_best is not None and prev_result is not None
            and np.array_equal(current_best.position, prev_best.position)):
        return prev_result.best_point, prev_result.best_value
    return current_best.position, current_best.value


def pattern_search(eval_fn: Callable, start: np.ndarray, start_value: float,
                   lower: np.ndarray, upper: np.ndarray, budget: int,
                   step_tol: float) -> tuple:
    """Bounded coordinate pattern search with parabolic steps.

    Per coordinate: probe one step down and up (clipped to the box), fit
    a parabola through the three points and try its vertex, accept the
    best strict improvement, and double the step when a full-length probe
    was accepted; otherwise halve it. After each sweep a pattern move
    along the sweep's net displacement is attempted. Stops when the
    budget is spent or every step falls below ``step_tol``.

    Returns ``(best_point, best_value, evals_used)``; the start value is
    taken as given and costs no evaluation.
    """
    dim = len(start)
    used = 0
    x = np.array(start, dtype=float)
    fx = float(start_value)
    best_x, best_f = x.copy(), fx

    def probe(point):
        nonlocal used, best_x, best_f
        value = eval_fn(point)
        used += 1
        if value < best_f:
            best_f, best_x = value, point.copy()
        return value

    steps = _INITIAL_STEP_FRACTION * (upper - lower)
    while used < budget and np.max(steps) >= step_tol:
        sweep_start = x.copy()
        for j in range(dim):
            if used >= budget:
                break
            if steps[j] < step_tol:
                continue
            down = x.copy()
            down[j] = max(lower[j], x[j] - steps[j])
            up = x.copy()
            up[j] = min(upper[j], x[j] + steps[j])
            candidates = []
            f_down = f_up = None
            if down[j] != x[j]:
                f_down = probe(down)
                candidates.append((f_down, down))
            if used < budget and up[j] != x[j]:
                f_up = probe(up)
                candidates.append((f_up, up))
            if f_down is not None and f_up is not None and used < budget:
                vertex = _parabola_vertex(down[j], x[j], up[j], f_down, fx, f_up)
                if vertex is not None and abs(vertex - x[j]) <= _PARABOLA_TRUST * steps[j]:
                    vertex = min(upper[j], max(lower[j], vertex))
                    if vertex not in (down[j], x[j], up[j]):
                        mid = x.copy()
                        mid[j] = vertex
                        candidates.append((probe(mid), mid))
            if candidates:
                f_new, x_new = min(candidates, key=lambda c: c[0])
                if f_new < fx:
                    moved = abs(x_new[j] - x[j])
                    x, fx = x_new, f_new
                    if moved >= 0.9 * steps[j]:
                        steps[j] = min(2.0 * steps[j], upper[j] - lower[j])
                    continue
            steps[j] *= 0.5
        move = x - sweep_start
        if used < budget and np.any(move != 0.0):
            shifted = np.minimum(upper, np.maximum(lower, x + move))
            if not np.array_equal(shifted, x):
                f_shift = probe(shifted)
                if f_shift < fx:
                    x, fx = shifted, f_shift
    return best_x, best_f, used


def _parabola_vertex(x1, x2, x3, f1, f2, f3):
    """Vertex abscissa of the parabola through three collinear samples,
    or None when it degenerates."""
    d21 = x2 - x1
    d23 = x2 - x3
    num = d21 * d21 * (f2 - f3) - d23 * d23 * (f2 - f1)
    den = d21 * (f2 - f3) - d23 * (f2 - f1)
    if den == 0.0 or not math.isfinite(num / den):
        return None
    return x2 - 0.5 * num / den


def local_minimize(objective: Objective, terr: Territory, budget: int,
                   counter: EvaluationCounter,
                   start_value: Optional[float] = None,
                   minimizer: Callable = pattern_search) -> LocalResult:
    """Run the local descent from ``terr.start``, spending at most
    ``min(budget, counter.remaining)`` evaluations.

    The start's cached value is reused when supplied; otherwise one
    evaluation is charged to obtain it. The result is never worse than
    the start.
    """
    allowed = min(int(budget), counter.remaining)
    start = np.array(terr.start, dtype=float)
    before = counter.count
    if start_value is None:
        if allowed <= 0:
            raise ValueError("no budget left to evaluate the start point")
        start_value = evaluate(objective, Eagle(start.copy()), counter).value
        allowed -= 1
    if allowed <= 0:
        return LocalResult(start, float(start_value), counter.count - before)

    def eval_fn(x):
        return evaluate(objective, Eagle(np.array(x, dtype=float)), counter).value

    step_tol = STEP_TOL_FACTOR * terr.size
    point, value, used = minimizer(eval_fn, start, float(start_value),
                                   terr.lower, terr.upper, allowed, step_tol)
    if used > allowed:
        raise RuntimeError("local minimizer violated its evaluation budget")
    return LocalResult(np.array(point, dtype=float), float(value),
                       counter.count - before)
