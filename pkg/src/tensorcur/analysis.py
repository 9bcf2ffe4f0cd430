"""Coherence, error metrics, and perturbation-bound evaluators.

The bound evaluators compute the right-hand sides of the CUR approximation
error guarantees for the additive-noise model ``observed = exact + noise``,
where the exact tensor has known low multilinear rank.  They need both the
exact tensor and the noise, so they are synthetic-setting diagnostics, not
production estimators: the bounds are stated in terms of singular vectors of
the noiseless unfoldings.
"""

import math
from dataclasses import dataclass

import numpy as np

from .cur import CurDecomposition
from .linalg import compact_svd, multilinear_rank
from .tensor import frobenius_norm, spectral_norm, subtensor, unfold

__all__ = [
    "CoherenceReport",
    "BoundReport",
    "coherence",
    "tensor_coherence",
    "evaluate_error_bounds",
    "general_error_bound",
    "chidori_error_bound",
    "relative_error",
    "snr_db",
]

_ORTHONORMALITY_TOL = 1e-6


def coherence(w) -> float:
    """Coherence of an orthonormal-column matrix: ``(d / r) * max_i ||w[i, :]||^2``.

    Always lies in ``[1, d / r]``; 1 for perfectly spread rows, ``d / r``
    when some row carries a whole unit vector.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[1] == 0:
        raise ValueError("coherence expects a matrix with at least one column")
    d, r = w.shape
    gram_residual = np.linalg.norm(w.T @ w - np.eye(r))
    if gram_residual > _ORTHONORMALITY_TOL:
        raise ValueError(
            f"matrix columns are not orthonormal (residual {gram_residual:.3e})"
        )
    row_norms = np.einsum("ij,ij->i", w, w)
    return float(d / r * row_norms.max())


@dataclass(frozen=True)
class CoherenceReport:
    """Per-mode coherences and the spectral extremes across unfoldings."""

    mode_coherences: tuple[float, ...]
    coherence: float
    sigma_min: float
    sigma_max: float
    mode_singular_values: tuple[np.ndarray, ...]


def tensor_coherence(a, ranks=None, tol: float | None = None) -> CoherenceReport:
    """Coherence of every mode unfolding's leading left singular vectors.

    ``sigma_min`` is the smallest retained singular value across modes (the
    r_i-th of each unfolding) and ``sigma_max`` the largest overall.  With
    ``ranks=None`` the numerical multilinear rank is used.
    """
    a = np.asarray(a, dtype=np.float64)
    if ranks is None:
        ranks = multilinear_rank(a, tol)
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != a.ndim:
        raise ValueError(f"expected {a.ndim} ranks, got {len(ranks)}")
    mus = []
    svals = []
    smin = math.inf
    smax = 0.0
    for k, r in enumerate(ranks):
        f = compact_svd(unfold(a, k))
        if f.rank < r:
            raise ValueError(
                f"mode {k} unfolding has numerical rank {f.rank} < requested {r}"
            )
        mus.append(coherence(f.left[:, :r]))
        svals.append(f.singular_values[:r].copy())
        smin = min(smin, float(f.singular_values[r - 1]))
        smax = max(smax, float(f.singular_values[0]))
    return CoherenceReport(tuple(mus), max(mus), smin, smax, tuple(svals))


@dataclass(frozen=True)
class BoundReport:
    """Measured CUR approximation error next to the evaluated bound RHS values.

    ``general_bound`` applies to both variants; ``chidori_bound`` is the
    tighter-premise specialization for composite fiber indices and is ``None``
    for Fiber decompositions.  When every premise flag holds
    (``sigma_r(U_i) > 8 ||E_{I_i,J_i}||_2`` per mode), the measured error is
    guaranteed not to exceed either RHS.
    """

    measured_error: float
    general_bound: float
    chidori_bound: float | None
    premise_ok: tuple[bool, ...]
    guaranteed: bool
    core_noise_norm: float
    core_spectral_norms: tuple[float, ...]
    subfactor_pinv_norms: tuple[float, ...]
    intersection_pinv_norms: tuple[float, ...]
    intersection_sigma_r: tuple[float, ...]
    fiber_noise_norms: tuple[float, ...]
    intersection_noise_norms: tuple[float, ...]


def _inverse_or_inf(x: float) -> float:
    return 1.0 / x if x > 0.0 else math.inf


def evaluate_error_bounds(exact, noise, dec: CurDecomposition) -> BoundReport:
    """Evaluate the approximation-error bound RHS values for ``dec`` built
    from ``exact + noise``.

    ``exact`` must have multilinear rank equal to ``dec.ranks``.  All
    noiseless submatrices (core, fibers, intersections) are re-extracted from
    ``exact`` at the decomposition's indices, and the left singular vectors
    of the noiseless unfoldings supply the subfactor pseudoinverse norms.
    """
    exact = np.asarray(exact, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    if exact.shape != noise.shape:
        raise ValueError("exact tensor and noise must have the same shape")
    if exact.shape != dec.dims:
        raise ValueError("decomposition dims do not match the tensor")
    n = exact.ndim
    ranks = dec.ranks

    core_noise = frobenius_norm(subtensor(noise, dec.row_indices))
    clean_core = subtensor(exact, dec.row_indices)
    core_spectral = tuple(spectral_norm(unfold(clean_core, j)) for j in range(n))

    w_pinv = []
    u_pinv = []
    u_sigma_r = []
    a_pinv = []
    e_fiber = []
    e_inter = []
    premise = []
    for i in range(n):
        r = ranks[i]
        unfolding = unfold(exact, i)
        f = compact_svd(unfolding)
        if f.rank < r:
            raise ValueError(
                f"exact tensor has mode-{i} rank {f.rank}, below target {r}"
            )
        w_sub = f.left[:, :r][dec.row_indices[i], :]
        s_w = np.linalg.svd(w_sub, compute_uv=False)
        sigma_r_w = float(s_w[r - 1]) if s_w.size >= r else 0.0
        w_pinv.append(_inverse_or_inf(sigma_r_w))
        a_pinv.append(_inverse_or_inf(float(f.singular_values[r - 1])))

        clean_u = unfolding[np.ix_(dec.row_indices[i], dec.fiber_indices[i])]
        s_u = np.linalg.svd(clean_u, compute_uv=False)
        sigma_r_u = float(s_u[r - 1]) if s_u.size >= r else 0.0
        u_sigma_r.append(sigma_r_u)
        u_pinv.append(_inverse_or_inf(sigma_r_u))

        noise_fibers = unfold(noise, i)[:, dec.fiber_indices[i]]
        noise_inter = noise_fibers[dec.row_indices[i], :]
        e_fiber.append(frobenius_norm(noise_fibers))
        e_inter.append(frobenius_norm(noise_inter))
        premise.append(sigma_r_u > 8.0 * spectral_norm(noise_inter))

    lead = (9.0 / 4.0) ** n * math.prod(w_pinv) * core_noise
    general = lead
    for j in range(n):
        others = math.prod(w_pinv[i] for i in range(n) if i != j)
        coef = (9.0 / 4.0) ** (n - 1 - j)
        general += coef * core_spectral[j] * others * (
            5.0 * u_pinv[j] * w_pinv[j] * e_inter[j] + 2.0 * u_pinv[j] * e_fiber[j]
        )

    chidori = None
    if dec.variant == "chidori":
        chidori = lead
        for j in range(n):
            others_sq = math.prod(w_pinv[i] ** 2 for i in range(n) if i != j)
            coef = (9.0 / 4.0) ** (n - 1 - j)
            chidori += coef * core_spectral[j] * others_sq * a_pinv[j] * w_pinv[j] * (
                5.0 * w_pinv[j] * e_inter[j] + 2.0 * e_fiber[j]
            )

    measured = frobenius_norm(exact - dec.reconstruct())
    return BoundReport(
        measured_error=measured,
        general_bound=general,
        chidori_bound=chidori,
        premise_ok=tuple(premise),
        guaranteed=all(premise),
        core_noise_norm=core_noise,
        core_spectral_norms=core_spectral,
        subfactor_pinv_norms=tuple(w_pinv),
        intersection_pinv_norms=tuple(u_pinv),
        intersection_sigma_r=tuple(u_sigma_r),
        fiber_noise_norms=tuple(e_fiber),
        intersection_noise_norms=tuple(e_inter),
    )


def general_error_bound(exact, noise, dec: CurDecomposition) -> float:
    """RHS of the approximation-error bound valid for both CUR variants."""
    return evaluate_error_bounds(exact, noise, dec).general_bound


def chidori_error_bound(exact, noise, dec: CurDecomposition) -> float:
    """RHS of the specialized bound for composite (Chidori) fiber indices."""
    report = evaluate_error_bounds(exact, noise, dec)
    if report.chidori_bound is None:
        raise ValueError("the specialized bound requires a chidori decomposition")
    return report.chidori_bound


def relative_error(a, approx) -> float:
    """``||a - approx||_F / ||a||_F``; the reference must be nonzero."""
    a = np.asarray(a, dtype=np.float64)
    approx = np.asarray(approx, dtype=np.float64)
    norm = frobenius_norm(a)
    if norm == 0.0:
        raise ValueError("relative error undefined for a zero reference tensor")
    return frobenius_norm(a - approx) / norm


def snr_db(x, x_r) -> float:
    """Signal-to-noise ratio ``10 * log10(||x||_F^2 / ||x - x_r||_F^2)`` in dB."""
    x = np.asarray(x, dtype=np.float64)
    x_r = np.asarray(x_r, dtype=np.float64)
    denom = frobenius_norm(x - x_r)
    if denom == 0.0:
        raise ValueError("SNR undefined for an exact reconstruction")
    return 20.0 * math.log10(frobenius_norm(x) / denom)
