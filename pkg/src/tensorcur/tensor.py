"""Dense tensor algebra: unfolding, folding, mode products, and subtensor extraction.

Conventions used throughout the package:

* A tensor is a ``numpy.ndarray`` of 64-bit floats with ``ndim >= 1``.
* Flat storage order is first-index-fastest (Fortran order).  Every
  flatten/reshape in this module uses ``order="F"``, so the mode-0
  unfolding is a plain reshape.
* Modes and index sets are 0-based.
* ``unfold(t, k)`` is the ``d_k x prod(d_j, j != k)`` matrix whose column
  for multi-index ``(i_0, ..., i_{n-1})`` is ``sum_{m != k} i_m * s_m``
  with stride ``s_m = prod_{l < m, l != k} d_l`` (remaining indices,
  first varying fastest).  ``composite_index`` linearizes per-mode index
  sets with exactly this column convention.
"""

from functools import reduce

import numpy as np

__all__ = [
    "unfold",
    "fold",
    "mode_product",
    "multi_mode_product",
    "kronecker",
    "outer",
    "subtensor",
    "select_fibers",
    "composite_index",
    "frobenius_norm",
    "spectral_norm",
]


def _as_tensor(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if t.ndim < 1:
        raise ValueError("tensor must have at least one mode")
    return t


def _check_mode(t: np.ndarray, k: int) -> None:
    if not 0 <= k < t.ndim:
        raise ValueError(f"mode {k} out of range for a {t.ndim}-mode tensor")


def as_index_array(indices, extent: int) -> np.ndarray:
    """Validate a 0-based index set: in range, strictly increasing, no duplicates."""
    idx = np.asarray(indices, dtype=np.intp)
    if idx.ndim != 1 or idx.size == 0:
        raise ValueError("index set must be a nonempty 1-d sequence")
    if idx[0] < 0 or idx[-1] >= extent:
        if np.any(idx < 0) or np.any(idx >= extent):
            raise ValueError(f"index out of range for extent {extent}")
    if np.any(np.diff(idx) <= 0):
        raise ValueError("index set must be strictly increasing")
    return idx


def unfold(t, k: int) -> np.ndarray:
    """Mode-k unfolding: rows are indexed by mode k, columns by the remaining
    modes with the first remaining index varying fastest."""
    t = _as_tensor(t)
    _check_mode(t, k)
    return np.reshape(np.moveaxis(t, k, 0), (t.shape[k], -1), order="F")


def fold(m, k: int, dims) -> np.ndarray:
    """Inverse of :func:`unfold`: ``fold(unfold(t, k), k, t.shape) == t``."""
    m = np.asarray(m, dtype=np.float64)
    dims = tuple(int(d) for d in dims)
    if m.ndim != 2:
        raise ValueError("fold expects a matrix")
    if not 0 <= k < len(dims):
        raise ValueError(f"mode {k} out of range for dims {dims}")
    rest = tuple(d for j, d in enumerate(dims) if j != k)
    expected = (dims[k], int(np.prod(rest)) if rest else 1)
    if m.shape != expected:
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims} at mode {k}")
    return np.moveaxis(np.reshape(m, (dims[k],) + rest, order="F"), 0, k)


def mode_product(t, a, k: int) -> np.ndarray:
    """Multiply tensor ``t`` along mode ``k`` by matrix ``a``.

    The result satisfies ``unfold(result, k) == a @ unfold(t, k)``; mode k's
    extent is replaced by ``a.shape[0]``.
    """
    t = _as_tensor(t)
    a = np.asarray(a, dtype=np.float64)
    _check_mode(t, k)
    if a.ndim != 2:
        raise ValueError("mode_product expects a matrix")
    if a.shape[1] != t.shape[k]:
        raise ValueError(
            f"matrix has {a.shape[1]} columns but mode {k} has extent {t.shape[k]}"
        )
    dims = list(t.shape)
    dims[k] = a.shape[0]
    return fold(a @ unfold(t, k), k, dims)


def multi_mode_product(t, matrices) -> np.ndarray:
    """Apply :func:`mode_product` for every non-``None`` entry of ``matrices``
    (one optional matrix per mode), in ascending mode order.

    The result does not depend on the application order because the modes
    are distinct.
    """
    t = _as_tensor(t)
    matrices = list(matrices)
    if len(matrices) != t.ndim:
        raise ValueError(f"expected {t.ndim} per-mode entries, got {len(matrices)}")
    out = t
    for k, a in enumerate(matrices):
        if a is not None:
            out = mode_product(out, a, k)
    return out


def kronecker(a, b) -> np.ndarray:
    """Kronecker product with the block layout ``[a_ij * b]``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("kronecker expects matrices")
    return np.kron(a, b)


def outer(vectors) -> np.ndarray:
    """Outer product of ``n`` vectors: entry ``(i_0, ..., i_{n-1})`` equals
    ``prod_k v_k[i_k]``.  Every unfolding of the result has rank <= 1."""
    vectors = [np.asarray(v, dtype=np.float64).ravel() for v in vectors]
    if not vectors:
        raise ValueError("outer requires at least one vector")
    return reduce(np.multiply.outer, vectors)


def subtensor(t, index_sets) -> np.ndarray:
    """Extract ``t[I_0, I_1, ..., I_{n-1}]`` for per-mode index sets."""
    t = _as_tensor(t)
    if len(index_sets) != t.ndim:
        raise ValueError(f"expected {t.ndim} index sets, got {len(index_sets)}")
    idx = [as_index_array(ind, t.shape[m]) for m, ind in enumerate(index_sets)]
    return t[np.ix_(*idx)]


def select_fibers(t, k: int, cols) -> np.ndarray:
    """Columns ``cols`` of ``unfold(t, k)``; each column is a mode-k fiber."""
    t = _as_tensor(t)
    _check_mode(t, k)
    total = t.size // t.shape[k]
    cols = as_index_array(cols, total)
    return unfold(t, k)[:, cols]


def composite_index(index_sets, k: int, dims) -> np.ndarray:
    """Linearize per-mode index sets ``{I_j}_{j != k}`` into column indices of
    the mode-k unfolding.

    ``index_sets`` has one entry per mode; the entry at position ``k`` is
    ignored (``None`` is accepted).  The output is sorted ascending and
    satisfies ``select_fibers(t, k, composite_index(I, k, t.shape)) ==
    unfold(subtensor(t with mode k full), k)``.
    """
    dims = tuple(int(d) for d in dims)
    if not 0 <= k < len(dims):
        raise ValueError(f"mode {k} out of range for dims {dims}")
    if len(index_sets) != len(dims):
        raise ValueError(f"expected {len(dims)} index-set entries, got {len(index_sets)}")
    offsets = np.zeros(1, dtype=np.intp)
    stride = 1
    for m, d in enumerate(dims):
        if m == k:
            continue
        im = as_index_array(index_sets[m], d)
        # offsets so far are < stride, so iterating im slowest keeps ascending order
        offsets = (stride * im[:, None] + offsets[None, :]).ravel()
        stride *= d
    return offsets


def frobenius_norm(t) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(t, dtype=np.float64).ravel()))


def spectral_norm(m) -> float:
    """Largest singular value of a matrix."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("spectral_norm expects a matrix")
    if min(m.shape) == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))
