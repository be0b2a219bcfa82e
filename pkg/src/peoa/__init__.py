"""peoa: the Philippine Eagle Optimization Algorithm.

A population-based global optimizer for bound-constrained minimization,
combining an intensive local food search around the best candidate with
three exploratory offspring operators under adaptive parameter control,
plus a reproducible benchmark and experiment harness.
"""
from .core import (BudgetExhausted, ConfigError, Eagle, EvaluationAbort,
                   EvaluationCounter, NonFiniteObjective, Objective,
                   OptimizerConfig, RunRecord, SearchSpace, Termination,
                   evaluate, function_error)
from .optimizer import run

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted",
    "ConfigError",
    "Eagle",
    "EvaluationAbort",
    "EvaluationCounter",
    "NonFiniteObjective",
    "Objective",
    "OptimizerConfig",
    "RunRecord",
    "SearchSpace",
    "Termination",
    "evaluate",
    "function_error",
    "run",
    "__version__",
]
