"""Global-phase machinery: the three offspring operators, the external
archive, subpopulation assignment, greedy selection, and boundary repair.

Operator candidates are always boundary-repaired before they are
returned, so every candidate lies inside the search space. Random draws
happen in a fixed, documented order per operator; reordering them would
break seeded reproducibility.
"""
from __future__ import annotations

import math

import numpy as np

from .core import Eagle
from .sampling import LevyParams, levy_step

MOVEMENT, MUTATION_ONE, MUTATION_TWO = 0, 1, 2


class InsufficientPopulation(ValueError):
    """Too few eagles for an operator's distinct-member draws."""


class Population:
    """Evaluated eagles stored as parallel arrays, sortable by value.

    When sorted, row 0 is the incumbent best (minimum value).
    """

    def __init__(self, positions: np.ndarray, values: np.ndarray):
        self.positions = np.array(positions, dtype=float)
        self.values = np.array(values, dtype=float)
        if self.positions.ndim != 2 or len(self.values) != len(self.positions):
            raise ValueError("positions must be (S, D) with one value per row")
        self.is_sorted = False

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    def sort(self) -> None:
        order = np.argsort(self.values, kind="stable")
        self.positions = self.positions[order]
        self.values = self.values[order]
        self.is_sorted = True

    def replace(self, i: int, position: np.ndarray, value: float) -> None:
        self.positions[i] = position
        self.values[i] = value
        self.is_sorted = False

    def truncate_worst(self, new_size: int) -> None:
        """Drop the highest-value rows; requires a sorted population."""
        if not self.is_sorted:
            raise ValueError("population must be sorted before truncation")
        if new_size < len(self.values):
            self.positions = self.positions[:new_size]
            self.values = self.values[:new_size]

    def mean_position(self) -> np.ndarray:
        return np.mean(self.positions, axis=0)


class Archive:
    """Positions of parents beaten by their offspring, capacity-bounded.

    When an insertion pushes the archive over capacity, uniformly random
    entries are evicted until it fits again.
    """

    def __init__(self, capacity: int):
        self.capacity = int(capacity)
        self.entries: list = []

    def __len__(self) -> int:
        return len(self.entries)

    def add(self, position: np.ndarray, rng: np.random.Generator) -> None:
        self.entries.append(np.array(position, dtype=float))
        while len(self.entries) > self.capacity:
            self.entries.pop(int(rng.integers(len(self.entries))))


def repair_bounds(candidate: np.ndarray, space) -> np.ndarray:
    """Clamp every component into the closed box bounds."""
    return np.minimum(space.upper, np.maximum(space.lower, candidate))


def assign_subpopulations(size: int, probabilities: np.ndarray,
                          rng: np.random.Generator) -> np.ndarray:
    """Assign each eagle an operator code by a per-eagle uniform draw.

    ``probabilities`` is normalized to sum 1; an eagle with draw j gets
    MOVEMENT if j <= p1, MUTATION_ONE if j <= p1+p2, else MUTATION_TWO.
    """
    p = np.asarray(probabilities, dtype=float)
    p = p / np.sum(p)
    codes = np.empty(size, dtype=int)
    for i in range(size):
        j = rng.random()
        if j <= p[0]:
            codes[i] = MOVEMENT
        elif j <= p[0] + p[1]:
            codes[i] = MUTATION_ONE
        else:
            codes[i] = MUTATION_TWO
    return codes


def nearest_neighbor(positions: np.ndarray, i: int) -> tuple:
    """Index of and Euclidean distance to the member closest to row i.

    The member itself is excluded; exact distance ties resolve to the
    lowest index.
    """
    diffs = positions - positions[i]
    d2 = np.sum(diffs * diffs, axis=1)
    d2[i] = math.inf
    j = int(np.argmin(d2))
    return j, math.sqrt(d2[j])


def draw_movement_partners(size: int, archive_size: int,
                           rng: np.random.Generator) -> tuple:
    """Draw the movement operator's peer and archive-union indices.

    Returns ``(peer, pop_index, archive_index)`` where exactly one of the
    last two is not None. The peer is uniform over rows 1..size-1; the
    union draw is uniform over the remaining population rows plus all
    archive entries, so it can never collide with the best row or the
    peer (entries are distinct by index even when positions coincide).
    """
    peer = int(rng.integers(1, size))
    k = int(rng.integers((size - 2) + archive_size))
    if k < size - 2:
        idx = k + 1            # skip the best at row 0
        if idx >= peer:
            idx += 1           # skip the already-drawn peer
        return peer, idx, None
    return peer, None, k - (size - 2)


def movement(i: int, pop: Population, archive: Archive, space,
             f_scale: float, rng: np.random.Generator) -> np.ndarray:
    """Move eagle i toward the best, a random peer, an archive draw, and
    its nearest neighbor (proximity weighted by exp(-d^2)).

    Draw order: peer index, then archive-union index. The peer is uniform
    over the population minus the best; the archive draw is uniform over
    the union of population and archive minus the best and the peer,
    treating duplicates across the two sets as distinct entries.
    """
    if not pop.is_sorted:
        raise ValueError("movement requires a sorted population")
    size = pop.size
    if size < 5:
        raise InsufficientPopulation(f"movement needs at least 5 eagles, have {size}")
    r1, pop_idx, arc_idx = draw_movement_partners(size, len(archive), rng)
    arc_pos = pop.positions[pop_idx] if pop_idx is not None else archive.entries[arc_idx]
    near, dist = nearest_neighbor(pop.positions, i)
    xi = pop.positions[i]
    step = ((pop.positions[0] - xi)
            + (pop.positions[r1] - arc_pos)
            + math.exp(-dist * dist) * (pop.positions[near] - xi))
    return repair_bounds(xi + f_scale * step, space)


def mutation_one(pop: Population, space, f_scale: float, levy: LevyParams,
                 rng: np.random.Generator) -> np.ndarray:
    """Weighted recombination of two distinct peers with the best, plus a
    Levy-flight perturbation scaled by a fresh uniform vector.

    Draw order: first peer, second peer (rejection until distinct),
    scale vector, Levy step.
    """
    if not pop.is_sorted:
        raise ValueError("mutation_one requires a sorted population")
    size = pop.size
    if size < 3:
        raise InsufficientPopulation(f"mutation_one needs at least 3 eagles, have {size}")
    r1 = int(rng.integers(1, size))
    r2 = int(rng.integers(1, size))
    while r2 == r1:
        r2 = int(rng.integers(1, size))
    scale_vec = rng.random(pop.dimension)
    step = levy_step(pop.dimension, levy, rng)
    cand = f_scale * (pop.positions[r1] + pop.positions[0] - pop.positions[r2])
    return repair_bounds(cand + scale_vec * step, space)


def mutation_two(pop: Population, space, f_scale: float,
                 rng: np.random.Generator) -> np.ndarray:
    """Blend a fresh uniform random point with the best eagle relative to
    the population mean."""
    if not pop.is_sorted:
        raise ValueError("mutation_two requires a sorted population")
    fresh = space.lower + rng.random(space.dimension) * space.widths
    cand = f_scale * (fresh + pop.positions[0] - pop.mean_position())
    return repair_bounds(cand, space)


def select_and_archive(parent: Eagle, offspring: Eagle, archive: Archive,
                       rng: np.random.Generator) -> Eagle:
    """Greedy survivor selection: the offspring proceeds when not worse.

    On a strict improvement the displaced parent's position enters the
    archive; on a tie the offspring survives but nothing is archived;
    rejected offspring are discarded outright.
    """
    if parent.value is None or offspring.value is None:
        raise ValueError("both eagles must be evaluated before selection")
    if offspring.value <= parent.value:
        if offspring.value < parent.value:
            archive.add(parent.position, rng)
        return offspring
    return parent
