"""The main optimization loop.

One run proceeds as: Latin-hypercube initialization, a local food search
around the best eagle, then generations alternating a global phase
(population-size reduction, operator assignment, one offspring per eagle
with a per-offspring scaling factor, synchronous evaluation, greedy
selection with archiving) with another local food search, while operator
probabilities and the scaling-factor memory adapt to observed
improvements. The run stops when the best value seen is within tolerance
of the known optimum or the evaluation budget is spent, whichever comes
first.

Runs are single-threaded and bit-reproducible for a fixed seed;
independent runs with different seeds can safely execute in parallel.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from . import operators as ops
from .adaptation import ScalingMemory, improvement_rate, reduce_population_size, update_probabilities
from .core import (BudgetExhausted, Eagle, EvaluationAbort, EvaluationCounter, Objective,
                   OptimizerConfig, RunRecord, SearchSpace, Termination, evaluate,
                   function_error)
from .local_search import LocalResult, local_minimize, pattern_search, territory, warm_start_rule
from .sampling import LevyParams, latin_hypercube, make_rng


def should_terminate(counter: EvaluationCounter, config: OptimizerConfig,
                     known_optimum: Optional[float]) -> bool:
    """Stop on either a spent budget or, when the optimum is known, a
    best-so-far error strictly below the target tolerance."""
    if counter.count >= counter.max_evals:
        return True
    if known_optimum is None or counter.best_position is None:
        return False
    return function_error(counter.best_value, known_optimum) < config.target_tolerance


def run(objective: Objective, space: SearchSpace, config: OptimizerConfig, *,
        local_minimizer: Callable = pattern_search) -> RunRecord:
    """Execute one full optimization run and return its record.

    Raises :class:`~peoa.core.ConfigError` for inconsistent settings and
    propagates :class:`~peoa.core.EvaluationAbort` subclasses (non-finite
    objective values, external-objective failures) with the partial
    progress attached to the exception.
    """
    config.validate()
    counter = EvaluationCounter(config.max_evals)
    try:
        return _run(objective, space, config, counter, local_minimizer)
    except EvaluationAbort as exc:
        exc.evals_used = counter.count
        exc.best_value = counter.best_value
        exc.best_position = counter.best_position
        exc.trace = list(counter.trace)
        raise


def _run(objective, space, config, counter, local_minimizer) -> RunRecord:
    rng = make_rng(config.seed)
    if objective.stochastic and objective.rng is None:
        objective.rng = rng
    levy = LevyParams(config.levy_beta)
    pop_cap = config.initial_pop_size
    archive = ops.Archive(int(config.archive_rate * pop_cap))
    memory = ScalingMemory(config.memory_size)
    probabilities = np.full(3, 1.0 / 3.0)
    generations = 0
    pop_sizes: list = []

    prev_best: Optional[Eagle] = None
    prev_local: Optional[LocalResult] = None

    # Initialization: one evaluation per eagle; the budget may already
    # run dry here, in which case the best initial eagle is the answer.
    seeds = latin_hypercube(space, pop_cap, rng)
    values = []
    truncated = False
    for row in seeds:
        try:
            values.append(evaluate(objective, Eagle(row), counter).value)
        except BudgetExhausted:
            truncated = True
            break
    pop = ops.Population(seeds[:len(values)], np.array(values))
    pop.sort()
    if truncated:
        return _record(counter, config, objective, generations, pop_sizes)

    def local_phase():
        nonlocal prev_best, prev_local
        best = Eagle(pop.positions[0].copy(), float(pop.values[0]))
        start, start_value = warm_start_rule(prev_best, prev_local, best)
        terr = territory(best, space, config.territory_fraction, start=start)
        prev_local = local_minimize(objective, terr, config.local_budget, counter,
                                    start_value=start_value, minimizer=local_minimizer)
        prev_best = best

    local_phase()

    while not should_terminate(counter, config, objective.known_optimum):
        generations += 1
        target = reduce_population_size(pop_cap, config.min_pop_size,
                                        counter.count, config.max_evals)
        pop_sizes.append((counter.count, target))
        pop.truncate_worst(target)
        size = pop.size

        codes = ops.assign_subpopulations(size, probabilities, rng)
        factors = np.empty(size)
        candidates = np.empty_like(pop.positions)
        for i in range(size):
            f_scale, _ = memory.draw(rng)
            factors[i] = f_scale
            if codes[i] == ops.MOVEMENT:
                candidates[i] = ops.movement(i, pop, archive, space, f_scale, rng)
            elif codes[i] == ops.MUTATION_ONE:
                candidates[i] = ops.mutation_one(pop, space, f_scale, levy, rng)
            else:
                candidates[i] = ops.mutation_two(pop, space, f_scale, rng)

        # Synchronous batch: evaluate as many offspring as the budget
        # allows; unevaluated ones are dropped and their parents survive.
        n_eval = min(size, counter.remaining)
        parent_values = pop.values[:n_eval].copy()
        offspring_values = np.empty(n_eval)
        for i in range(n_eval):
            offspring_values[i] = evaluate(objective, Eagle(candidates[i]), counter).value

        improved_factors = []
        improved_deltas = []
        for i in range(n_eval):
            parent = Eagle(pop.positions[i].copy(), float(pop.values[i]))
            child = Eagle(candidates[i], float(offspring_values[i]))
            survivor = ops.select_and_archive(parent, child, archive, rng)
            if survivor is child:
                if child.value < parent.value:
                    improved_factors.append(factors[i])
                    improved_deltas.append(parent.value - child.value)
                pop.replace(i, child.position, child.value)
        pop.sort()

        local_phase()

        rates = np.array([
            improvement_rate(parent_values[codes[:n_eval] == op],
                             offspring_values[codes[:n_eval] == op])
            for op in (ops.MOVEMENT, ops.MUTATION_ONE, ops.MUTATION_TWO)])
        probabilities = update_probabilities(rates, probabilities)
        memory.update(improved_factors, improved_deltas)

    return _record(counter, config, objective, generations, pop_sizes)


def _record(counter, config, objective, generations, pop_sizes) -> RunRecord:
    tolerance_met = (objective.known_optimum is not None
                     and counter.best_position is not None
                     and function_error(counter.best_value, objective.known_optimum)
                     < config.target_tolerance)
    return RunRecord(
        best_value=counter.best_value,
        best_position=np.array(counter.best_position, dtype=float),
        evals_used=counter.count,
        generations=generations,
        trace=list(counter.trace),
        terminated_by=(Termination.TOLERANCE_REACHED if tolerance_met
                       else Termination.BUDGET_EXHAUSTED),
        pop_sizes=pop_sizes,
    )
