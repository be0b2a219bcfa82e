import numpy as np
import pytest

from peoa import benchmarks
from peoa.adaptation import reduce_population_size
from peoa.core import (ConfigError, EvaluationCounter, Objective,
                       OptimizerConfig, SearchSpace, Termination)
from peoa.optimizer import run, should_terminate
from peoa.sampling import latin_hypercube, make_rng


def counting(fn):
    calls = {"n": 0}

    def wrapped(x):
        calls["n"] += 1
        return fn(x)

    return wrapped, calls


class TestShouldTerminate:
    def _counter(self, count, best, max_evals=100):
        counter = EvaluationCounter(max_evals)
        counter.count = count
        counter.best_value = best
        counter.best_position = np.zeros(1)
        return counter

    def test_budget_boundary(self):
        cfg = OptimizerConfig.for_dimension(1, max_evals=100)
        assert should_terminate(self._counter(100, 5.0), cfg, None)
        assert not should_terminate(self._counter(99, 5.0), cfg, None)

    def test_tolerance_strictly_below(self):
        cfg = OptimizerConfig.for_dimension(1, max_evals=100)
        assert should_terminate(self._counter(10, 1e-9), cfg, 0.0)
        assert not should_terminate(self._counter(10, 1e-8), cfg, 0.0)

    def test_no_known_optimum(self):
        cfg = OptimizerConfig.for_dimension(1, max_evals=100)
        assert not should_terminate(self._counter(10, 0.0), cfg, None)


class TestRun:
    def test_sphere_reaches_tolerance(self):
        objective, space = benchmarks.make("sphere", 2)
        record = run(objective, space, OptimizerConfig.for_dimension(2, seed=1))
        assert record.terminated_by is Termination.TOLERANCE_REACHED
        assert record.best_value < 1e-8
        assert record.evals_used <= 20000

    def test_unknown_optimum_runs_to_budget(self):
        objective, space = benchmarks.make("sphere", 2)
        objective.known_optimum = None
        record = run(objective, space, OptimizerConfig.for_dimension(2, seed=1, max_evals=500))
        assert record.terminated_by is Termination.BUDGET_EXHAUSTED
        assert record.evals_used == 500

    def test_budget_equal_to_initial_population(self):
        objective, space = benchmarks.make("sphere", 2)
        config = OptimizerConfig.for_dimension(2, seed=4, max_evals=80)
        record = run(objective, space, config)
        assert record.evals_used == 80
        assert record.generations == 0
        seeds = latin_hypercube(space, 80, make_rng(4))
        expected = min(benchmarks.sphere(row) for row in seeds)
        assert record.best_value == expected

    def test_every_evaluation_counted(self):
        fn, calls = counting(benchmarks.rastrigin)
        objective = Objective(fn=fn, known_optimum=None)
        space = SearchSpace.symmetric(-5.12, 5.12, 2)
        for budget in (81, 137, 500):
            calls["n"] = 0
            config = OptimizerConfig.for_dimension(2, seed=2, max_evals=budget)
            record = run(objective, space, config)
            assert record.evals_used == budget == calls["n"]

    def test_all_evaluations_inside_bounds(self):
        space = SearchSpace.symmetric(-5.12, 5.12, 2)

        def guarded(x):
            assert space.contains(x)
            return benchmarks.rastrigin(x)

        objective = Objective(fn=guarded, known_optimum=None)
        record = run(objective, space, OptimizerConfig.for_dimension(2, seed=6, max_evals=3000))
        assert record.evals_used == 3000

    def test_trace_monotone_and_consistent(self):
        objective, space = benchmarks.make("rastrigin", 2)
        record = run(objective, space, OptimizerConfig.for_dimension(2, seed=9))
        bests = [b for _, b in record.trace]
        assert all(a > b for a, b in zip(bests, bests[1:]))
        assert record.trace[-1][1] == record.best_value
        counts = [c for c, _ in record.trace]
        assert all(a < b for a, b in zip(counts, counts[1:]))
        assert counts[-1] <= record.evals_used

    def test_deterministic_replay(self):
        objective1, space = benchmarks.make("rastrigin", 2)
        objective2, _ = benchmarks.make("rastrigin", 2)
        config = OptimizerConfig.for_dimension(2, seed=123, max_evals=4000)
        a = run(objective1, space, config)
        b = run(objective2, space, config)
        assert a.best_value == b.best_value
        assert np.array_equal(a.best_position, b.best_position)
        assert a.evals_used == b.evals_used
        assert a.trace == b.trace
        assert a.pop_sizes == b.pop_sizes

    def test_stochastic_objective_deterministic_replay(self):
        config = OptimizerConfig.for_dimension(2, seed=31, max_evals=2000)
        records = []
        for _ in range(2):
            objective, space = benchmarks.make("xin_she_yang_1", 2)
            objective.known_optimum = None
            records.append(run(objective, space, config))
        assert records[0].best_value == records[1].best_value
        assert records[0].trace == records[1].trace

    def test_population_size_staircase(self):
        objective, space = benchmarks.make("xin_she_yang_1", 2)
        config = OptimizerConfig.for_dimension(2, seed=7)
        record = run(objective, space, config)
        assert record.pop_sizes, "expected at least one generation"
        assert record.pop_sizes[0][1] == 80
        sizes = [s for _, s in record.pop_sizes]
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))
        for evals_at_start, size in record.pop_sizes:
            assert size == reduce_population_size(80, 5, evals_at_start, 20000)

    def test_generations_counted(self):
        objective, space = benchmarks.make("rastrigin", 2)
        objective.known_optimum = None
        record = run(objective, space, OptimizerConfig.for_dimension(2, seed=2, max_evals=1000))
        assert record.generations == len(record.pop_sizes) > 0

    def test_invalid_config_rejected(self):
        objective, space = benchmarks.make("sphere", 2)
        config = OptimizerConfig(initial_pop_size=80, local_budget=40,
                                 memory_size=40, max_evals=20000, min_pop_size=3)
        with pytest.raises(ConfigError):
            run(objective, space, config)

    def test_nonfinite_objective_aborts_with_partial_state(self):
        space = SearchSpace.symmetric(-1.0, 1.0, 2)
        state = {"n": 0}

        def flaky(x):
            state["n"] += 1
            if state["n"] >= 50:
                return float("nan")
            return float(np.sum(x * x))

        objective = Objective(fn=flaky, known_optimum=None)
        from peoa.core import NonFiniteObjective
        with pytest.raises(NonFiniteObjective) as excinfo:
            run(objective, space, OptimizerConfig.for_dimension(2, seed=3, max_evals=1000))
        assert excinfo.value.evals_used == 49
        assert excinfo.value.best_value < np.inf
        assert excinfo.value.trace
