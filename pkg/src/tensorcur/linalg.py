"""Matrix factorization primitives: compact SVD, pseudoinverses, numerical rank, QR.

All factorizations are dense and delegate to LAPACK through ``numpy.linalg``.
The default rank cutoff is the conventional ``max(rows, cols) * eps`` relative
to the largest singular value.
"""

from dataclasses import dataclass

import numpy as np

from .tensor import unfold

__all__ = [
    "SvdFactors",
    "compact_svd",
    "pinv",
    "rank_r_pinv",
    "numerical_rank",
    "qr_factor",
    "multilinear_rank",
]

# floor (relative to sigma_1) below which a requested singular value is treated
# as zero when building a rank-limited pseudoinverse
_PINV_FLOOR = 1e-14


@dataclass(frozen=True)
class SvdFactors:
    """Compact SVD ``m = left @ diag(singular_values) @ right.T``.

    ``left`` and ``right`` have orthonormal columns; ``singular_values`` is
    nonincreasing and contains only the values retained by the rank cutoff.
    """

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return self.singular_values.size

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singular_values) @ self.right.T


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("expected a matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def default_rank_tol(m: np.ndarray) -> float:
    """Relative singular-value cutoff: ``max(rows, cols) * machine epsilon``."""
    return max(m.shape) * np.finfo(np.float64).eps


def compact_svd(m, tol: float | None = None) -> SvdFactors:
    """Compact SVD retaining exactly the triples with ``sigma_j > tol * sigma_1``.

    The zero matrix yields empty factors (rank 0).
    """
    m = _as_matrix(m)
    if tol is None:
        tol = default_rank_tol(m)
    if min(m.shape) == 0:
        return SvdFactors(np.zeros((m.shape[0], 0)), np.zeros(0), np.zeros((m.shape[1], 0)))
    w, s, vt = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s > tol * s[0]))
    return SvdFactors(w[:, :r], s[:r], vt[:r].T)


def numerical_rank(m, tol: float | None = None) -> int:
    """Number of singular values above ``tol * sigma_1``."""
    return compact_svd(m, tol).rank


def pinv(m, tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse via the compact SVD.

    Satisfies the four Penrose identities; ``pinv`` of a zero matrix is the
    zero matrix of transposed shape.
    """
    m = _as_matrix(m)
    f = compact_svd(m, tol)
    if f.rank == 0:
        return np.zeros((m.shape[1], m.shape[0]))
    return (f.right / f.singular_values) @ f.left.T


def rank_r_pinv(m, r: int) -> np.ndarray:
    """Pseudoinverse of the best rank-``r`` approximation of ``m``.

    Equals ``V_r diag(1/sigma_1..1/sigma_r) W_r.T``.  Singular values below
    ``1e-14 * sigma_1`` are not inverted: the effective rank is silently
    reduced, which avoids dividing by numerically-zero values when the
    requested rank exceeds the numerical rank.
    """
    m = _as_matrix(m)
    if r < 0:
        raise ValueError("rank must be nonnegative")
    if r == 0 or min(m.shape) == 0:
        return np.zeros((m.shape[1], m.shape[0]))
    w, s, vt = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[1], m.shape[0]))
    k = min(int(r), int(np.count_nonzero(s > _PINV_FLOOR * s[0])))
    if k == 0:
        return np.zeros((m.shape[1], m.shape[0]))
    return (vt[:k].T / s[:k]) @ w[:, :k].T


def qr_factor(m) -> tuple[np.ndarray, np.ndarray]:
    """Reduced QR factorization: ``q @ r == m`` with orthonormal ``q`` columns."""
    m = _as_matrix(m)
    q, r = np.linalg.qr(m, mode="reduced")
    return q, r


def multilinear_rank(t, tol: float | None = None) -> tuple[int, ...]:
    """Numerical rank of every mode unfolding."""
    t = np.asarray(t, dtype=np.float64)
    return tuple(numerical_rank(unfold(t, k), tol) for k in range(t.ndim))
