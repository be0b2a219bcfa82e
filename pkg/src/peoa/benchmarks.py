"""Benchmark suite: 20 box-constrained test functions spanning the four
modality/separability families, each with its range, known optimum and
minimizer. All formulas use 1-based coordinate indices.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import Objective, SearchSpace


class Family(enum.Enum):
    UNIMODAL_SEPARABLE = "unimodal-separable"
    MULTIMODAL_SEPARABLE = "multimodal-separable"
    UNIMODAL_NONSEPARABLE = "unimodal-nonseparable"
    MULTIMODAL_NONSEPARABLE = "multimodal-nonseparable"


class UnknownFunctionError(ValueError):
    pass


class TranscriptionMismatch(RuntimeError):
    """A registry entry disagrees with its declared optimum."""


def _idx(x):
    return np.arange(1, len(x) + 1)


def powell_sum(x):
    return float(np.sum(np.abs(x) ** (_idx(x) + 1)))


def schwefel_2_20(x):
    return float(np.sum(np.abs(x)))


def schwefel_2_21(x):
    return float(np.max(np.abs(x)))


def sphere(x):
    return float(np.sum(x * x))


def sum_squares(x):
    return float(np.sum(_idx(x) * x * x))


def alpine_1(x):
    return float(np.sum(np.abs(x * np.sin(x) + 0.1 * x)))


def wavy(x):
    return float(1.0 - np.mean(np.cos(10.0 * x) * np.exp(-0.5 * x * x)))


def qing(x):
    return float(np.sum((x * x - _idx(x)) ** 2))


def rastrigin(x):
    return float(10.0 * len(x) + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def xin_she_yang_1(x, rng):
    # Stochastic by definition: fresh uniform coefficients per evaluation.
    return float(np.sum(rng.random(len(x)) * np.abs(x) ** _idx(x)))


def brown(x):
    a = x[:-1] ** 2
    b = x[1:] ** 2
    return float(np.sum(a ** (b + 1.0) + b ** (a + 1.0)))


def rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def schwefel_2_22(x):
    return float(np.sum(np.abs(x)) + np.prod(np.abs(x)))


def xin_she_yang_3(x):
    return float(np.exp(-np.sum((x / 15.0) ** 10))
                 - 2.0 * np.exp(-np.sum(x * x)) * np.prod(np.cos(x) ** 2))


def zakharov(x):
    s = np.sum(0.5 * _idx(x) * x)
    return float(np.sum(x * x) + s ** 2 + s ** 4)


def ackley(x):
    return float(-20.0 * np.exp(-0.2 * np.sqrt(np.mean(x * x)))
                 - np.exp(np.mean(np.cos(2.0 * np.pi * x))) + 20.0 + math.e)


def periodic(x):
    return float(1.0 + np.sum(np.sin(x) ** 2) - 0.1 * np.exp(-np.sum(x * x)))


def griewank(x):
    return float(1.0 + np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(_idx(x)))))


def salomon(x):
    r = np.sqrt(np.sum(x * x))
    return float(1.0 - np.cos(2.0 * np.pi * r) + 0.1 * r)


def xin_she_yang_4(x):
    return float((np.sum(np.sin(x) ** 2) - np.exp(-np.sum(x * x)))
                 * np.exp(-np.sum(np.sin(np.sqrt(np.abs(x))) ** 2)))


def _zeros(dim):
    return np.zeros(dim)


def _ones(dim):
    return np.ones(dim)


def _sqrt_index(dim):
    return np.sqrt(np.arange(1, dim + 1, dtype=float))


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    family: Family
    bounds: tuple
    f_true: float
    solution: Callable[[int], np.ndarray]
    fn: Callable
    stochastic: bool = False


_SPECS = [
    BenchmarkSpec("powell_sum", Family.UNIMODAL_SEPARABLE, (-1.0, 1.0), 0.0, _zeros, powell_sum),
    BenchmarkSpec("schwefel_2_20", Family.UNIMODAL_SEPARABLE, (-100.0, 100.0), 0.0, _zeros, schwefel_2_20),
    BenchmarkSpec("schwefel_2_21", Family.UNIMODAL_SEPARABLE, (-100.0, 100.0), 0.0, _zeros, schwefel_2_21),
    BenchmarkSpec("sphere", Family.UNIMODAL_SEPARABLE, (-5.12, 5.12), 0.0, _zeros, sphere),
    BenchmarkSpec("sum_squares", Family.UNIMODAL_SEPARABLE, (-10.0, 10.0), 0.0, _zeros, sum_squares),
    BenchmarkSpec("alpine_1", Family.MULTIMODAL_SEPARABLE, (0.0, 10.0), 0.0, _zeros, alpine_1),
    BenchmarkSpec("wavy", Family.MULTIMODAL_SEPARABLE, (-math.pi, math.pi), 0.0, _zeros, wavy),
    BenchmarkSpec("qing", Family.MULTIMODAL_SEPARABLE, (-500.0, 500.0), 0.0, _sqrt_index, qing),
    BenchmarkSpec("rastrigin", Family.MULTIMODAL_SEPARABLE, (-5.12, 5.12), 0.0, _zeros, rastrigin),
    BenchmarkSpec("xin_she_yang_1", Family.MULTIMODAL_SEPARABLE, (-5.0, 5.0), 0.0, _zeros,
                  xin_she_yang_1, stochastic=True),
    BenchmarkSpec("brown", Family.UNIMODAL_NONSEPARABLE, (-1.0, 4.0), 0.0, _zeros, brown),
    BenchmarkSpec("rosenbrock", Family.UNIMODAL_NONSEPARABLE, (-5.0, 10.0), 0.0, _ones, rosenbrock),
    BenchmarkSpec("schwefel_2_22", Family.UNIMODAL_NONSEPARABLE, (-100.0, 100.0), 0.0, _zeros, schwefel_2_22),
    BenchmarkSpec("xin_she_yang_3", Family.UNIMODAL_NONSEPARABLE, (-2.0 * math.pi, 2.0 * math.pi), -1.0,
                  _zeros, xin_she_yang_3),
    BenchmarkSpec("zakharov", Family.UNIMODAL_NONSEPARABLE, (-5.0, 10.0), 0.0, _zeros, zakharov),
    BenchmarkSpec("ackley", Family.MULTIMODAL_NONSEPARABLE, (-32.768, 32.768), 0.0, _zeros, ackley),
    BenchmarkSpec("periodic", Family.MULTIMODAL_NONSEPARABLE, (-10.0, 10.0), 0.9, _zeros, periodic),
    BenchmarkSpec("griewank", Family.MULTIMODAL_NONSEPARABLE, (-100.0, 100.0), 0.0, _zeros, griewank),
    BenchmarkSpec("salomon", Family.MULTIMODAL_NONSEPARABLE, (-100.0, 100.0), 0.0, _zeros, salomon),
    BenchmarkSpec("xin_she_yang_4", Family.MULTIMODAL_NONSEPARABLE, (-10.0, 10.0), -1.0, _zeros, xin_she_yang_4),
]

REGISTRY = {spec.name: spec for spec in _SPECS}

PAPER_DIMENSIONS = (2, 5, 10, 20)


def names() -> list:
    return [spec.name for spec in _SPECS]


def get(name: str) -> BenchmarkSpec:
    key = name.strip().lower().replace("-", "_").replace(" ", "_").replace(".", "_")
    try:
        return REGISTRY[key]
    except KeyError:
        raise UnknownFunctionError(
            f"unknown function {name!r}; known: {', '.join(names())}") from None


def make(name: str, dimension: int,
         rng: Optional[np.random.Generator] = None) -> tuple:
    """Objective and search space for one benchmark at a given dimension."""
    if dimension < 1:
        raise ValueError("dimension must be positive")
    spec = get(name)
    space = SearchSpace.symmetric(spec.bounds[0], spec.bounds[1], dimension)
    objective = Objective(
        fn=spec.fn,
        known_optimum=spec.f_true,
        known_solution=spec.solution(dimension),
        stochastic=spec.stochastic,
        rng=rng,
    )
    return objective, space


def verify_optimum(name: str, dimension: int, *, samples: int = 100,
                   seed: int = 0) -> dict:
    """Check a deterministic registry entry against its declared optimum.

    Asserts the function value at the known solution matches ``f_true``
    within 1e-10 and that no random in-range sample beats it. Raises
    :class:`TranscriptionMismatch` naming the offending function.
    """
    spec = get(name)
    if spec.stochastic:
        raise ValueError(f"{spec.name} is stochastic; optimum check needs a deterministic function")
    objective, space = make(name, dimension)
    at_solution = objective(spec.solution(dimension))
    if abs(at_solution - spec.f_true) >= 1e-10:
        raise TranscriptionMismatch(
            f"{spec.name}: value at known solution is {at_solution!r}, expected {spec.f_true!r}")
    rng = np.random.default_rng(seed)
    sampled_min = math.inf
    for _ in range(samples):
        x = space.lower + rng.random(dimension) * space.widths
        value = objective(x)
        sampled_min = min(sampled_min, value)
        if value < spec.f_true - 1e-10:
            raise TranscriptionMismatch(
                f"{spec.name}: sampled value {value!r} at {x.tolist()} beats declared optimum {spec.f_true!r}")
    return {
        "function": spec.name,
        "dimension": dimension,
        "value_at_solution": at_solution,
        "declared_optimum": spec.f_true,
        "sampled_minimum": sampled_min,
        "samples": samples,
    }
