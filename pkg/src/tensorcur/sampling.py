"""Reproducible index sampling: plans, length-based distributions, and
without-replacement draws.

Determinism contract: every draw is a pure function of a
``numpy.random.Generator`` state.  A :class:`SamplingPlan` carries a single
64-bit seed; building a decomposition from the same plan twice yields
bit-identical results.  Uniform draws use a partial Fisher-Yates shuffle;
weighted draws are sequential without-replacement draws, renormalizing the
remaining probabilities after each removal.  Index sets are always returned
sorted ascending so downstream slicing is reproducible.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SamplingPlan",
    "length_distribution",
    "sample_without_replacement",
    "chidori_sample_sizes",
    "fiber_sample_sizes",
]

DISTRIBUTIONS = ("uniform", "length")


@dataclass(frozen=True)
class SamplingPlan:
    """Per-mode sample sizes plus the distribution and seed for index draws.

    ``row_counts`` are the per-mode subtensor sizes t_i; ``fiber_counts`` are
    the per-mode fiber counts s_i and are required only for Fiber plans.
    ``distribution`` is ``"uniform"`` or ``"length"``; length-based plans
    weight mode-index draws by squared row norms of the mode unfolding and
    fiber draws by squared column norms.
    """

    row_counts: tuple[int, ...]
    fiber_counts: tuple[int, ...] | None = None
    distribution: str = "uniform"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "row_counts", tuple(int(t) for t in self.row_counts))
        if self.fiber_counts is not None:
            object.__setattr__(
                self, "fiber_counts", tuple(int(s) for s in self.fiber_counts)
            )
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if any(t < 1 for t in self.row_counts):
            raise ValueError("row sample sizes must be positive")
        if self.fiber_counts is not None:
            if len(self.fiber_counts) != len(self.row_counts):
                raise ValueError("fiber_counts must have one entry per mode")
            if any(s < 1 for s in self.fiber_counts):
                raise ValueError("fiber sample sizes must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def length_distribution(m, axis: str = "rows") -> np.ndarray:
    """Probability vector proportional to squared row (or column) norms.

    ``p_j = ||m[j, :]||^2 / ||m||_F^2`` for ``axis="rows"`` and the column
    analogue for ``axis="cols"``.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("length_distribution expects a matrix")
    if axis == "rows":
        sq = np.einsum("ij,ij->i", m, m)
    elif axis == "cols":
        sq = np.einsum("ij,ij->j", m, m)
    else:
        raise ValueError("axis must be 'rows' or 'cols'")
    total = sq.sum()
    if total <= 0.0:
        raise ValueError("degenerate distribution: zero matrix")
    return sq / total


def _uniform_without_replacement(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    # partial Fisher-Yates over [0, n) with a sparse swap map; O(k) time/space
    swapped: dict[int, int] = {}
    out = np.empty(k, dtype=np.intp)
    for i in range(k):
        j = int(rng.integers(i, n))
        out[i] = swapped.get(j, j)
        swapped[j] = swapped.get(i, i)
    return out


def _weighted_without_replacement(
    probabilities: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    p = np.array(probabilities, dtype=np.float64)
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and nonnegative")
    if int(np.count_nonzero(p > 0)) < k:
        raise ValueError(
            f"cannot draw {k} indices: only {np.count_nonzero(p > 0)} have positive probability"
        )
    out = np.empty(k, dtype=np.intp)
    for i in range(k):
        cum = np.cumsum(p)
        u = rng.random() * cum[-1]
        j = int(np.searchsorted(cum, u, side="right"))
        j = min(j, p.size - 1)
        while p[j] == 0.0:  # guard against landing on a removed index
            j -= 1
        out[i] = j
        p[j] = 0.0
    return out


def sample_without_replacement(
    n: int, k: int, rng: np.random.Generator, probabilities=None
) -> np.ndarray:
    """Draw ``k`` distinct indices from ``[0, n)``, returned sorted ascending.

    With ``probabilities=None`` the draw is uniform (partial Fisher-Yates);
    otherwise indices are drawn sequentially with renormalization, so each
    draw follows the exact conditional distribution given earlier removals.
    """
    n = int(n)
    k = int(k)
    if k < 1:
        raise ValueError("sample size must be positive")
    if k > n:
        raise ValueError(f"cannot draw {k} indices from a population of {n}")
    if probabilities is None:
        out = _uniform_without_replacement(n, k, rng)
    else:
        probabilities = np.asarray(probabilities, dtype=np.float64)
        if probabilities.shape != (n,):
            raise ValueError("probabilities must have one entry per population element")
        out = _weighted_without_replacement(probabilities, k, rng)
    out.sort()
    return out


def _size_from_log(r: int, population: int, scale: float, what: str) -> int:
    size = max(int(r), math.ceil(scale * r * math.log(population)))
    if size > population:
        raise ValueError(
            f"default {what} sample size {size} exceeds population {population}; "
            "pass explicit sizes"
        )
    return size


def chidori_sample_sizes(dims, ranks) -> tuple[int, ...]:
    """Default per-mode subtensor sizes ``t_i = ceil(r_i * log d_i)``.

    Raises if the prescription exceeds a mode's extent rather than clamping.
    """
    dims = tuple(int(d) for d in dims)
    ranks = tuple(int(r) for r in ranks)
    return tuple(_size_from_log(r, d, 1.0, "row") for d, r in zip(dims, ranks))


def fiber_sample_sizes(dims, ranks) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Default Fiber sizes: ``t_i = ceil(r_i log d_i)`` and
    ``s_i = ceil(2 r_i log(prod_{j != i} d_j))``."""
    dims = tuple(int(d) for d in dims)
    ranks = tuple(int(r) for r in ranks)
    t = chidori_sample_sizes(dims, ranks)
    s = []
    for i, r in enumerate(ranks):
        rest = 1
        for j, d in enumerate(dims):
            if j != i:
                rest *= d
        s.append(_size_from_log(r, rest, 2.0, "fiber"))
    return t, tuple(s)
