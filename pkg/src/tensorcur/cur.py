"""Chidori and Fiber tensor CUR decompositions.

Both variants pick a core subtensor ``R = A[I_0, ..., I_{n-1}]`` and, per
mode, a fiber matrix ``C_i`` (columns of the mode-i unfolding) with
intersection ``U_i = C_i[I_i, :]``.  The Chidori variant takes the fiber
columns to be the composite of the other modes' index sets, which makes
``U_i`` equal to the mode-i unfolding of the core; the Fiber variant samples
fiber columns independently.  The approximation is

    R x_0 (C_0 @ rank_r_pinv(U_0, r_0)) x_1 ... x_{n-1} (C_{n-1} @ ...)

and it reproduces ``A`` exactly precisely when every ``U_i`` has rank equal
to the mode-i rank of ``A``.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import multilinear_rank, numerical_rank, pinv, rank_r_pinv, qr_factor
from .sampling import SamplingPlan, length_distribution, sample_without_replacement
from .tensor import (
    as_index_array,
    composite_index,
    frobenius_norm,
    multi_mode_product,
    subtensor,
    unfold,
)
from .tucker import HosvdDecomposition, hosvd

__all__ = [
    "CurDecomposition",
    "CharacterizationReport",
    "chidori_cur",
    "fiber_cur",
    "cur_with_indices",
    "projection_reconstruct",
    "check_characterization",
    "cur_to_hosvd",
]


@dataclass(frozen=True)
class CurDecomposition:
    """Core subtensor, per-mode fiber/intersection matrices, and their indices.

    ``fiber_indices[i]`` are column indices of the mode-i unfolding (the
    composite of the other modes' row indices for the Chidori variant).
    ``ranks`` are the target ranks enforced at reconstruction time.
    """

    variant: str
    core: np.ndarray
    fibers: tuple[np.ndarray, ...]
    intersections: tuple[np.ndarray, ...]
    row_indices: tuple[np.ndarray, ...]
    fiber_indices: tuple[np.ndarray, ...]
    ranks: tuple[int, ...]

    @property
    def ndim(self) -> int:
        return len(self.fibers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c.shape[0] for c in self.fibers)

    def mode_maps(self) -> list[np.ndarray]:
        """The per-mode reconstruction operators ``C_i @ rank_r_pinv(U_i, r_i)``."""
        return [
            c @ rank_r_pinv(u, r)
            for c, u, r in zip(self.fibers, self.intersections, self.ranks)
        ]

    def reconstruct(self) -> np.ndarray:
        """Apply the mode maps to the core; output has the source dims."""
        return multi_mode_product(self.core, self.mode_maps())


def _check_ranks(ndim: int, dims, ranks) -> tuple[int, ...]:
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != ndim:
        raise ValueError(f"expected {ndim} ranks, got {len(ranks)}")
    if any(r < 1 for r in ranks):
        raise ValueError("ranks must be positive")
    for k, (r, d) in enumerate(zip(ranks, dims)):
        if r > d:
            raise ValueError(f"rank {r} exceeds extent {d} at mode {k}")
    return ranks


def cur_with_indices(a, row_indices, ranks, fiber_indices=None) -> CurDecomposition:
    """Deterministic CUR construction from explicit index sets.

    With ``fiber_indices=None`` the Chidori variant is built (fiber columns
    are the composite of the other modes' row indices); otherwise the Fiber
    variant uses the given mode-i unfolding column sets.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.ndim
    if len(row_indices) != n:
        raise ValueError(f"expected {n} row index sets, got {len(row_indices)}")
    rows = tuple(as_index_array(idx, a.shape[k]) for k, idx in enumerate(row_indices))
    ranks = _check_ranks(n, a.shape, ranks)
    core = subtensor(a, rows)
    fibers = []
    intersections = []
    cols = []
    if fiber_indices is None:
        variant = "chidori"
        for i in range(n):
            slab_index = list(rows)
            slab_index[i] = np.arange(a.shape[i], dtype=np.intp)
            slab = a[np.ix_(*slab_index)]
            c = unfold(slab, i)
            fibers.append(c)
            intersections.append(c[rows[i], :])
            cols.append(composite_index(rows, i, a.shape))
    else:
        variant = "fiber"
        if len(fiber_indices) != n:
            raise ValueError(f"expected {n} fiber index sets, got {len(fiber_indices)}")
        for i in range(n):
            total = a.size // a.shape[i]
            j = as_index_array(fiber_indices[i], total)
            c = unfold(a, i)[:, j]
            fibers.append(c)
            intersections.append(c[rows[i], :])
            cols.append(j)
    return CurDecomposition(
        variant, core, tuple(fibers), tuple(intersections), rows, tuple(cols), ranks
    )


def _draw_rows(a: np.ndarray, plan: SamplingPlan, rng: np.random.Generator):
    if len(plan.row_counts) != a.ndim:
        raise ValueError(f"plan has {len(plan.row_counts)} row counts for a {a.ndim}-mode tensor")
    rows = []
    for i, t in enumerate(plan.row_counts):
        p = None
        if plan.distribution == "length":
            p = length_distribution(unfold(a, i), axis="rows")
        rows.append(sample_without_replacement(a.shape[i], t, rng, p))
    return tuple(rows)


def chidori_cur(a, plan: SamplingPlan, ranks) -> CurDecomposition:
    """Randomized Chidori CUR: draw per-mode index sets, take the core at
    their intersection and the fibers at their composite."""
    a = np.asarray(a, dtype=np.float64)
    rng = plan.rng()
    rows = _draw_rows(a, plan, rng)
    return cur_with_indices(a, rows, ranks)


def fiber_cur(a, plan: SamplingPlan, ranks) -> CurDecomposition:
    """Randomized Fiber CUR: draw per-mode index sets and, independently,
    per-mode fiber column sets."""
    a = np.asarray(a, dtype=np.float64)
    if plan.fiber_counts is None:
        raise ValueError("fiber_cur requires a plan with fiber_counts")
    rng = plan.rng()
    rows = _draw_rows(a, plan, rng)
    cols = []
    for i, s in enumerate(plan.fiber_counts):
        total = a.size // a.shape[i]
        q = None
        if plan.distribution == "length":
            q = length_distribution(unfold(a, i), axis="cols")
        cols.append(sample_without_replacement(total, s, rng, q))
    return cur_with_indices(a, rows, ranks, fiber_indices=tuple(cols))


def projection_reconstruct(a, dec: CurDecomposition) -> np.ndarray:
    """Project ``a`` onto the fiber column spaces: ``a x_i (C_i @ pinv(C_i))``."""
    a = np.asarray(a, dtype=np.float64)
    return multi_mode_product(a, [c @ pinv(c) for c in dec.fibers])


@dataclass(frozen=True)
class CharacterizationReport:
    """Per-mode rank conditions of the exactness characterization, plus the
    measured reconstruction error.

    For a source tensor of multilinear rank ``(r_0, ..., r_{n-1})`` the
    conditions agree: all intersections have full target rank iff the
    reconstruction is exact iff the fibers have full target rank and the core
    has the full multilinear rank.
    """

    target_ranks: tuple[int, ...]
    intersection_ranks: tuple[int, ...]
    fiber_ranks: tuple[int, ...]
    core_multilinear_rank: tuple[int, ...]
    slab_ranks: tuple[int, ...]
    relative_error: float
    tol: float

    @property
    def intersection_rank_ok(self) -> bool:
        return self.intersection_ranks == self.target_ranks

    @property
    def fiber_rank_ok(self) -> bool:
        return self.fiber_ranks == self.target_ranks

    @property
    def core_rank_ok(self) -> bool:
        return self.core_multilinear_rank == self.target_ranks

    @property
    def slab_rank_ok(self) -> bool:
        return self.slab_ranks == self.target_ranks

    @property
    def exact(self) -> bool:
        return self.relative_error < self.tol


def check_characterization(a, dec: CurDecomposition, tol: float = 1e-8) -> CharacterizationReport:
    """Evaluate every rank condition of the exactness characterization on one
    instance, at relative tolerance ``tol`` for both ranks and reconstruction."""
    a = np.asarray(a, dtype=np.float64)
    ranks = dec.ranks
    inter = tuple(numerical_rank(u, tol) for u in dec.intersections)
    fib = tuple(numerical_rank(c, tol) for c in dec.fibers)
    core = multilinear_rank(dec.core, tol)
    slabs = []
    for i, rows in enumerate(dec.row_indices):
        slabs.append(numerical_rank(unfold(a, i)[rows, :], tol))
    norm = frobenius_norm(a)
    if norm == 0.0:
        rel = 0.0
    else:
        rel = frobenius_norm(a - dec.reconstruct()) / norm
    return CharacterizationReport(ranks, inter, fib, core, tuple(slabs), rel, tol)


def cur_to_hosvd(dec: CurDecomposition) -> HosvdDecomposition:
    """Convert a CUR decomposition to an orthonormal Tucker form.

    QR-factor each mode map, push the triangular factors into the core, and
    take the compact HOSVD of the resulting small tensor.  The output
    reconstruction equals the CUR reconstruction; its factors are products of
    orthonormal matrices and thus orthonormal.
    """
    qs = []
    rs = []
    for mat in dec.mode_maps():
        q, r = qr_factor(mat)
        qs.append(q)
        rs.append(r)
    small = multi_mode_product(dec.core, rs)
    inner = hosvd(small)
    factors = tuple(q @ v for q, v in zip(qs, inner.factors))
    return HosvdDecomposition(inner.core, factors)
