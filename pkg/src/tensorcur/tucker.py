"""Orthogonal Tucker-format baselines: truncated HOSVD, sequentially
truncated HOSVD, and HOOI."""

from dataclasses import dataclass

import numpy as np

from .linalg import multilinear_rank
from .tensor import frobenius_norm, mode_product, multi_mode_product, unfold

__all__ = ["HosvdDecomposition", "hosvd", "st_hosvd", "hooi"]


@dataclass(frozen=True)
class HosvdDecomposition:
    """Core tensor plus one orthonormal-column factor matrix per mode."""

    core: np.ndarray
    factors: tuple[np.ndarray, ...]

    def reconstruct(self) -> np.ndarray:
        return multi_mode_product(self.core, self.factors)

    @property
    def ranks(self) -> tuple[int, ...]:
        return self.core.shape


def _check_ranks(t: np.ndarray, ranks) -> tuple[int, ...]:
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != t.ndim:
        raise ValueError(f"expected {t.ndim} ranks, got {len(ranks)}")
    for k, (r, d) in enumerate(zip(ranks, t.shape)):
        if r < 1:
            raise ValueError("ranks must be positive")
        if r > d:
            raise ValueError(f"rank {r} exceeds extent {d} at mode {k}")
    return ranks


def _leading_left_vectors(m: np.ndarray, r: int) -> np.ndarray:
    w = np.linalg.svd(m, full_matrices=False)[0]
    # a d x p unfolding has at most min(d, p) singular vectors
    return w[:, : min(r, w.shape[1])]


def hosvd(t, ranks=None, tol: float | None = None) -> HosvdDecomposition:
    """Truncated higher-order SVD.

    Factor ``k`` holds the leading ``r_k`` left singular vectors of the
    mode-k unfolding; the core is the input multiplied by every factor
    transpose.  With ``ranks=None`` the numerical multilinear rank is used,
    which makes the reconstruction exact for exactly low-rank inputs.
    """
    t = np.asarray(t, dtype=np.float64)
    if ranks is None:
        ranks = multilinear_rank(t, tol)
        ranks = tuple(max(1, r) for r in ranks)
    ranks = _check_ranks(t, ranks)
    factors = tuple(_leading_left_vectors(unfold(t, k), r) for k, r in enumerate(ranks))
    core = multi_mode_product(t, [w.T for w in factors])
    return HosvdDecomposition(core, factors)


def st_hosvd(t, ranks) -> HosvdDecomposition:
    """Sequentially truncated HOSVD, processing modes in ascending order.

    Each mode is compressed immediately after its factor is computed, so
    later SVDs act on progressively smaller tensors.
    """
    t = np.asarray(t, dtype=np.float64)
    ranks = _check_ranks(t, ranks)
    factors = []
    current = t
    for k, r in enumerate(ranks):
        w = _leading_left_vectors(unfold(current, k), r)
        factors.append(w)
        current = mode_product(current, w.T, k)
    return HosvdDecomposition(current, tuple(factors))


def hooi(t, ranks, max_iters: int = 50, tol: float = 1e-8) -> HosvdDecomposition:
    """Higher-order orthogonal iteration, initialized from :func:`st_hosvd`.

    Each sweep updates every factor to the leading left singular vectors of
    the unfolding of the input compressed along all other modes.  Sweeps stop
    when the relative change of the core norm drops below ``tol`` or after
    ``max_iters`` sweeps.  The fit is nonincreasing across sweeps.
    """
    t = np.asarray(t, dtype=np.float64)
    ranks = _check_ranks(t, ranks)
    if max_iters < 0:
        raise ValueError("max_iters must be nonnegative")
    factors = list(st_hosvd(t, ranks).factors)
    core = multi_mode_product(t, [w.T for w in factors])
    previous = frobenius_norm(core)
    for _ in range(max_iters):
        for k, r in enumerate(ranks):
            partial = t
            for j, w in enumerate(factors):
                if j != k:
                    partial = mode_product(partial, w.T, j)
            factors[k] = _leading_left_vectors(unfold(partial, k), r)
        core = multi_mode_product(t, [w.T for w in factors])
        current = frobenius_norm(core)
        if abs(current - previous) <= tol * max(current, np.finfo(np.float64).tiny):
            break
        previous = current
    return HosvdDecomposition(core, tuple(factors))
