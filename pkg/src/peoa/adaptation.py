"""Parameter control: linear population-size reduction, improvement-rate
driven operator probabilities, and success-history scaling factors.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from .sampling import cauchy_draw

log = logging.getLogger(__name__)

PROB_MIN = 0.1
PROB_MAX = 0.9
CAUCHY_SCALE = 0.1
MEMORY_INITIAL = 0.2
_MAX_REDRAWS = 100


def reduce_population_size(initial: int, minimum: int, evals: int,
                           max_evals: int) -> int:
    """Population size after ``evals`` of ``max_evals`` evaluations:
    linear interpolation from ``initial`` down to ``minimum``, rounded
    half away from zero."""
    x = initial + (minimum - initial) * (evals / max_evals)
    return int(math.floor(x + 0.5))


def improvement_rate(old_values, new_values) -> float:
    """Total improvement produced by one operator over a generation,
    normalized by the subpopulation's previous value mass.

    Returns 0 for an empty subpopulation and whenever the denominator is
    non-positive or non-finite (possible for objectives that take
    negative values), deferring to the other operators.
    """
    old = np.asarray(old_values, dtype=float)
    new = np.asarray(new_values, dtype=float)
    if len(old) != len(new):
        raise ValueError("old and new value lists must have equal length")
    if len(old) == 0:
        return 0.0
    den = float(np.sum(old))
    if not math.isfinite(den) or den <= 0.0:
        return 0.0
    num = float(np.sum(np.maximum(0.0, old - new)))
    return num / den


def update_probabilities(rates, previous) -> np.ndarray:
    """Operator probabilities from improvement rates, each clipped to
    [0.1, 0.9]. With no improvement anywhere (all rates zero) the
    previous probabilities are kept unchanged."""
    r = np.asarray(rates, dtype=float)
    total = float(np.sum(r))
    if total == 0.0:
        return np.array(previous, dtype=float)
    return np.clip(r / total, PROB_MIN, PROB_MAX)


class ScalingMemory:
    """Success-history memory of scaling-factor means.

    All slots start at 0.2. ``draw`` samples a factor from a Cauchy
    around a uniformly chosen slot; ``update`` overwrites the slot under
    a cyclic write cursor with the weighted Lehmer mean of the factors
    that produced strict improvements.
    """

    def __init__(self, size: int, initial: float = MEMORY_INITIAL):
        if size < 1:
            raise ValueError("memory size must be positive")
        self.means = np.full(int(size), float(initial))
        self.cursor = 0

    @property
    def size(self) -> int:
        return len(self.means)

    def draw(self, rng: np.random.Generator) -> tuple:
        """One scaling factor in (0, 1] plus the slot index it came from.

        Non-positive Cauchy draws are regenerated from the same slot;
        draws of 1 or more are truncated to 1. After 100 failed redraws
        the slot mean itself is returned (clamped to 1), which keeps the
        loop bounded even though reaching it is astronomically unlikely.
        """
        slot = int(rng.integers(self.size))
        mu = float(self.means[slot])
        for _ in range(_MAX_REDRAWS):
            f = cauchy_draw(mu, CAUCHY_SCALE, rng)
            if f > 0.0:
                return min(f, 1.0), slot
        log.warning("scaling-factor redraw limit hit; falling back to slot mean %.3f", mu)
        return min(mu, 1.0), slot

    def update(self, factors, deltas) -> None:
        """Record a generation's successful factors.

        ``factors`` are the scaling factors of offspring that strictly
        improved on their parents; ``deltas`` the matching value gains
        (positive). An empty generation leaves the memory untouched.
        """
        f = np.asarray(factors, dtype=float)
        d = np.asarray(deltas, dtype=float)
        if len(f) != len(d):
            raise ValueError("factors and deltas must have equal length")
        if len(f) == 0:
            return
        w = d / np.sum(d)
        self.means[self.cursor] = np.sum(w * f * f) / np.sum(w * f)
        self.cursor = (self.cursor + 1) % self.size
