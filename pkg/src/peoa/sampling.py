"""Seedable random sources: Latin hypercube designs, Levy-flight steps,
and Cauchy draws.

The generator is frozen to NumPy's PCG64 (``numpy.random.default_rng``):
the same seed always yields the same stream, which is what makes whole
runs bit-reproducible. Draw order inside each routine is part of that
contract and must not be reordered.
"""
from __future__ import annotations

import math

import numpy as np

GENERATOR = "numpy.random.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    """The library's one PRNG constructor; see module docstring."""
    return np.random.default_rng(int(seed))


def latin_hypercube(space, n: int, rng: np.random.Generator) -> np.ndarray:
    """Classic Latin hypercube sample of ``n`` points over ``space``.

    Per dimension, each of the ``n`` equal-width strata receives exactly
    one point, placed uniformly inside its stratum; the stratum-to-row
    assignment is an independent uniform permutation per dimension.
    """
    if n < 1:
        raise ValueError("sample size must be at least 1")
    dim = space.dimension
    out = np.empty((n, dim))
    for j in range(dim):
        strata = rng.permutation(n)
        offsets = rng.random(n)
        out[:, j] = space.lower[j] + space.widths[j] * (strata + offsets) / n
    return out


def levy_sigma(beta: float) -> float:
    """Scale constant of the Levy-flight step for a given tail exponent.

    Closed form: (gamma(1+b) sin(pi b/2) / (b gamma((1+b)/2) 2^((b-1)/2)))^(1/b),
    valid for beta in (1, 2].
    """
    if not 1.0 < beta <= 2.0:
        raise ValueError(f"beta must lie in (1, 2], got {beta}")
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = beta * math.gamma((1.0 + beta) / 2.0) * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


class LevyParams:
    """Tail exponent plus its derived scale constant."""

    __slots__ = ("beta", "sigma")

    def __init__(self, beta: float):
        self.beta = float(beta)
        self.sigma = levy_sigma(self.beta)


def levy_step(dim: int, params: LevyParams, rng: np.random.Generator) -> np.ndarray:
    """Heavy-tailed step vector, componentwise 0.01*u*sigma/|v|^(1/beta)
    with u, v standard normal. Components with v drawn exactly 0 are
    regenerated (probability-zero guard).
    """
    u = rng.standard_normal(dim)
    v = rng.standard_normal(dim)
    while np.any(v == 0.0):
        redo = v == 0.0
        v[redo] = rng.standard_normal(int(np.sum(redo)))
    return 0.01 * u * params.sigma / np.abs(v) ** (1.0 / params.beta)


def cauchy_draw(location: float, scale: float, rng: np.random.Generator) -> float:
    """One Cauchy variate via the inverse CDF; consumes one uniform."""
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    return location + scale * math.tan(math.pi * (rng.random() - 0.5))
