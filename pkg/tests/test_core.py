import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from peoa import benchmarks
from peoa.core import (BudgetExhausted, ConfigError, Eagle, EvaluationCounter,
                       NonFiniteObjective, Objective, OptimizerConfig,
                       SearchSpace, evaluate, function_error)


def sphere_objective():
    return Objective(fn=benchmarks.sphere, known_optimum=0.0)


class TestSearchSpace:
    def test_symmetric(self):
        space = SearchSpace.symmetric(-5.12, 5.12, 3)
        assert space.dimension == 3
        assert np.all(space.lower == -5.12) and np.all(space.upper == 5.12)

    def test_rejects_inverted_bounds(self):
        with pytest.raises(ValueError):
            SearchSpace(np.array([0.0, 1.0]), np.array([1.0, 1.0]))

    def test_contains(self):
        space = SearchSpace.symmetric(-1.0, 1.0, 2)
        assert space.contains(np.array([1.0, -1.0]))
        assert not space.contains(np.array([1.0001, 0.0]))


class TestEvaluate:
    def test_sphere_at_origin(self):
        counter = EvaluationCounter(10)
        eagle = evaluate(sphere_objective(), Eagle(np.zeros(2)), counter)
        assert eagle.value == 0.0
        assert counter.count == 1

    def test_sphere_at_ones(self):
        counter = EvaluationCounter(10)
        eagle = evaluate(sphere_objective(), Eagle(np.ones(2)), counter)
        assert eagle.value == 2.0

    def test_budget_boundary(self):
        counter = EvaluationCounter(1)
        evaluate(sphere_objective(), Eagle(np.zeros(2)), counter)
        with pytest.raises(BudgetExhausted):
            evaluate(sphere_objective(), Eagle(np.zeros(2)), counter)
        assert counter.count == 1

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, bad):
        counter = EvaluationCounter(10)
        obj = Objective(fn=lambda x: bad)
        with pytest.raises(NonFiniteObjective):
            evaluate(obj, Eagle(np.zeros(1)), counter)

    def test_incumbent_and_trace(self):
        counter = EvaluationCounter(20)
        obj = Objective(fn=lambda x: float(x[0]))
        for value in [5.0, 7.0, 3.0, 3.0, 1.0]:
            evaluate(obj, Eagle(np.array([value])), counter)
        assert counter.best_value == 1.0
        assert counter.trace == [(1, 5.0), (3, 3.0), (5, 1.0)]
        bests = [b for _, b in counter.trace]
        assert all(a > b for a, b in zip(bests, bests[1:]))

    def test_unevaluated_flag(self):
        eagle = Eagle(np.zeros(2))
        assert not eagle.evaluated


class TestFunctionError:
    def test_exact_match(self):
        assert function_error(0.9, 0.9) == 0.0

    def test_below_threshold_value(self):
        assert function_error(-1 + 1e-9, -1) == pytest.approx(1e-9, rel=1e-6)

    def test_plain_difference(self):
        assert function_error(3.5, 1.0) == 2.5

    @given(st.floats(-1e12, 1e12), st.floats(-1e12, 1e12))
    def test_symmetric_nonnegative(self, a, b):
        assert function_error(a, b) == function_error(b, a) >= 0.0


class TestOptimizerConfig:
    def test_dimension_defaults(self):
        cfg = OptimizerConfig.for_dimension(2)
        assert cfg.initial_pop_size == 80
        assert cfg.local_budget == 40
        assert cfg.memory_size == 40
        assert cfg.max_evals == 20000
        assert cfg.min_pop_size == 5
        assert cfg.territory_fraction == 0.04
        assert cfg.archive_rate == 2.6
        assert cfg.levy_beta == 1.5
        cfg.validate()

    def test_dimension_defaults_scale_quadratically(self):
        cfg = OptimizerConfig.for_dimension(5)
        assert (cfg.initial_pop_size, cfg.local_budget, cfg.memory_size,
                cfg.max_evals) == (500, 250, 100, 50000)

    @pytest.mark.parametrize("override", [
        {"min_pop_size": 4},
        {"initial_pop_size": 4},
        {"local_budget": 0},
        {"territory_fraction": 0.0},
        {"territory_fraction": 1.0},
        {"archive_rate": 0.0},
        {"memory_size": 0},
        {"levy_beta": 1.0},
        {"levy_beta": 2.5},
        {"max_evals": 0},
        {"target_tolerance": -1e-9},
    ])
    def test_validation_rejects(self, override):
        base = dict(initial_pop_size=80, local_budget=40, memory_size=40,
                    max_evals=20000)
        base.update(override)
        with pytest.raises(ConfigError):
            OptimizerConfig(**base).validate()
