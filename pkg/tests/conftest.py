"""Shared test helpers: scripted random sources and independent scalar
oracles for the offspring operators.

The oracles deliberately avoid the library's vectorized code paths: they
recompute candidates component by component with plain Python floats
from a recorded draw transcript, so a match certifies the arithmetic and
not just the plumbing.
"""
from __future__ import annotations

import math

import numpy as np


class FakeRng:
    """Scripted stand-in for numpy's Generator.

    Each supported method pops pre-seeded values; ranges are asserted so
    a mis-scripted test fails loudly.
    """

    def __init__(self, *, random=(), integers=(), normal=()):
        self._random = list(random)
        self._integers = list(integers)
        self._normal = list(normal)

    def random(self, size=None):
        if size is None:
            return self._random.pop(0)
        return np.array([self._random.pop(0) for _ in range(int(size))])

    def integers(self, low, high=None):
        lo, hi = (0, low) if high is None else (low, high)
        value = self._integers.pop(0)
        assert lo <= value < hi, f"scripted integer {value} outside [{lo}, {hi})"
        return value

    def standard_normal(self, size=None):
        if size is None:
            return self._normal.pop(0)
        return np.array([self._normal.pop(0) for _ in range(int(size))])

    def permutation(self, n):
        raise NotImplementedError("script permutations explicitly when needed")


class SpyRng:
    """Wraps a real Generator and records every draw it hands out."""

    def __init__(self, seed):
        self.inner = np.random.default_rng(seed)
        self.log = []

    def _record(self, name, value):
        self.log.append((name, value))
        return value

    def random(self, size=None):
        return self._record("random", self.inner.random(size))

    def integers(self, low, high=None):
        return self._record("integers", self.inner.integers(low, high))

    def standard_normal(self, size=None):
        return self._record("standard_normal", self.inner.standard_normal(size))

    def take(self, name):
        kind, value = self.log.pop(0)
        assert kind == name, f"expected a {name} draw, transcript has {kind}"
        return value


def clip_scalar(value, lo, hi):
    return min(hi, max(lo, value))


def movement_oracle(i, positions, archive_entries, lower, upper, f_scale, spy):
    """Scalar replay of the movement operator from a draw transcript."""
    size = len(positions)
    r1 = int(spy.take("integers"))
    k = int(spy.take("integers"))
    if k < size - 2:
        idx = k + 1
        if idx >= r1:
            idx += 1
        arc = positions[idx]
    else:
        arc = archive_entries[k - (size - 2)]
    best_d2, near = None, None
    for j in range(size):
        if j == i:
            continue
        d2 = 0.0
        for a, b in zip(positions[j], positions[i]):
            d2 += (a - b) * (a - b)
        if best_d2 is None or d2 < best_d2:
            best_d2, near = d2, j
    dist = math.sqrt(best_d2)
    out = []
    for j in range(len(positions[i])):
        xi = positions[i][j]
        step = ((positions[0][j] - xi) + (positions[r1][j] - arc[j])
                + math.exp(-dist * dist) * (positions[near][j] - xi))
        out.append(clip_scalar(xi + f_scale * step, lower[j], upper[j]))
    return out


def mutation_one_oracle(positions, lower, upper, f_scale, beta, sigma, spy):
    """Scalar replay of the Levy-flight mutation from a draw transcript."""
    r1 = int(spy.take("integers"))
    r2 = int(spy.take("integers"))
    while r2 == r1:
        r2 = int(spy.take("integers"))
    dim = len(positions[0])
    scale = list(spy.take("random"))
    u = list(spy.take("standard_normal"))
    v = list(spy.take("standard_normal"))
    while any(value == 0.0 for value in v):
        redraw = list(spy.take("standard_normal"))
        v = [redraw.pop(0) if value == 0.0 else value for value in v]
    out = []
    for j in range(dim):
        levy = 0.01 * u[j] * sigma / abs(v[j]) ** (1.0 / beta)
        cand = f_scale * (positions[r1][j] + positions[0][j] - positions[r2][j])
        out.append(clip_scalar(cand + scale[j] * levy, lower[j], upper[j]))
    return out


def mutation_two_oracle(positions, lower, upper, f_scale, spy):
    """Scalar replay of the mean-referenced mutation from a transcript."""
    fresh = list(spy.take("random"))
    size = len(positions)
    dim = len(positions[0])
    out = []
    for j in range(dim):
        mean = np.mean([positions[r][j] for r in range(size)])
        point = lower[j] + fresh[j] * (upper[j] - lower[j])
        cand = f_scale * (point + positions[0][j] - mean)
        out.append(clip_scalar(cand, lower[j], upper[j]))
    return out
