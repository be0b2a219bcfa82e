"""Shared domain types: search space, candidate solutions, objectives,
configuration, run records, and the single evaluation-counting gateway.

Every objective evaluation in the library goes through :func:`evaluate`
so that one counter owns the evaluation budget, the best-so-far
incumbent, and the convergence trace.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class BudgetExhausted(RuntimeError):
    """Raised when an evaluation is requested with no budget left."""


class EvaluationAbort(RuntimeError):
    """Base class for errors that abort a run from inside an objective.

    When the optimizer re-raises one of these it attaches the partial
    progress as attributes: ``evals_used``, ``best_value``,
    ``best_position`` and ``trace``.
    """


class NonFiniteObjective(EvaluationAbort):
    """An objective returned NaN or infinity, which signals user error."""


class ConfigError(ValueError):
    """Inconsistent optimizer configuration."""


class Termination(enum.Enum):
    TOLERANCE_REACHED = "tolerance"
    BUDGET_EXHAUSTED = "budget"


@dataclass(frozen=True)
class SearchSpace:
    """Box constraints: per-dimension lower and upper bounds."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("lower and upper must be 1-d arrays of equal length")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def symmetric(cls, low: float, high: float, dimension: int) -> "SearchSpace":
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Eagle:
    """One candidate solution: a position and its cached objective value.

    ``value is None`` marks an unevaluated eagle.
    """

    position: np.ndarray
    value: Optional[float] = None

    @property
    def evaluated(self) -> bool:
        return self.value is not None


@dataclass
class Objective:
    """Objective-function contract.

    ``fn(x)`` maps a length-D vector to a scalar, except for stochastic
    objectives which take ``fn(x, rng)``; the optimizer binds ``rng`` to
    the run's generator at start so replays stay deterministic.
    """

    fn: Callable
    known_optimum: Optional[float] = None
    known_solution: Optional[np.ndarray] = None
    stochastic: bool = False
    rng: Optional[np.random.Generator] = None

    def __call__(self, x: np.ndarray) -> float:
        if self.stochastic:
            if self.rng is None:
                raise RuntimeError("stochastic objective called without a bound rng")
            return self.fn(x, self.rng)
        return self.fn(x)


@dataclass(frozen=True)
class OptimizerConfig:
    """All optimizer constants for one run.

    ``for_dimension`` derives the published defaults from the problem
    dimension: initial population 20*D^2, local budget 10*D^2, memory
    size 20*D, evaluation budget 10000*D.
    """

    initial_pop_size: int
    local_budget: int
    memory_size: int
    max_evals: int
    min_pop_size: int = 5
    territory_fraction: float = 0.04
    archive_rate: float = 2.6
    levy_beta: float = 1.5
    target_tolerance: float = 1e-8
    seed: int = 0

    @classmethod
    def for_dimension(cls, dimension: int, *, seed: int = 0,
                      max_evals: Optional[int] = None,
                      territory_fraction: float = 0.04,
                      target_tolerance: float = 1e-8) -> "OptimizerConfig":
        if dimension < 1:
            raise ConfigError("dimension must be positive")
        return cls(
            initial_pop_size=20 * dimension * dimension,
            local_budget=10 * dimension * dimension,
            memory_size=20 * dimension,
            max_evals=10000 * dimension if max_evals is None else int(max_evals),
            territory_fraction=territory_fraction,
            target_tolerance=target_tolerance,
            seed=seed,
        )

    def validate(self) -> None:
        if self.min_pop_size < 5:
            raise ConfigError("min_pop_size must be at least 5 "
                              "(the movement operator draws five distinct eagles)")
        if self.initial_pop_size < self.min_pop_size:
            raise ConfigError("initial_pop_size must be >= min_pop_size")
        if self.local_budget < 1:
            raise ConfigError("local_budget must be positive")
        if not 0.0 < self.territory_fraction < 1.0:
            raise ConfigError("territory_fraction must lie in (0, 1)")
        if self.archive_rate <= 0.0:
            raise ConfigError("archive_rate must be positive")
        if self.memory_size < 1:
            raise ConfigError("memory_size must be positive")
        if not 1.0 < self.levy_beta <= 2.0:
            raise ConfigError("levy_beta must lie in (1, 2]")
        if self.max_evals < 1:
            raise ConfigError("max_evals must be positive")
        if self.target_tolerance < 0.0:
            raise ConfigError("target_tolerance must be non-negative")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")


@dataclass
class RunRecord:
    """Outcome of one optimizer run.

    ``trace`` holds ``(eval_count, best_so_far)`` pairs recorded at every
    strict improvement; ``pop_sizes`` holds ``(evals_at_generation_start,
    population_size)`` pairs, one per generation.
    """

    best_value: float
    best_position: np.ndarray
    evals_used: int
    generations: int
    trace: list
    terminated_by: Termination
    pop_sizes: list = field(default_factory=list)


class EvaluationCounter:
    """Budget accounting plus incumbent tracking shared by all phases."""

    def __init__(self, max_evals: int):
        self.max_evals = int(max_evals)
        self.count = 0
        self.best_value = math.inf
        self.best_position: Optional[np.ndarray] = None
        self.trace: list = []

    @property
    def remaining(self) -> int:
        return self.max_evals - self.count


def evaluate(objective: Objective, eagle: Eagle, counter: EvaluationCounter) -> Eagle:
    """Evaluate ``eagle`` in place, charging one unit of budget.

    Raises :class:`BudgetExhausted` if the counter is spent and
    :class:`NonFiniteObjective` if the objective returns NaN or infinity.
    """
    if counter.count >= counter.max_evals:
        raise BudgetExhausted(
            f"evaluation budget of {counter.max_evals} already spent")
    value = float(objective(eagle.position))
    if not math.isfinite(value):
        raise NonFiniteObjective(
            f"objective returned {value!r} at {eagle.position.tolist()}")
    counter.count += 1
    eagle.value = value
    if value < counter.best_value:
        counter.best_value = value
        counter.best_position = np.array(eagle.position, dtype=float)
        counter.trace.append((counter.count, value))
    return eagle


def function_error(value: float, f_true: float) -> float:
    """Distance between an obtained value and the known optimum."""
    return abs(value - f_true)
