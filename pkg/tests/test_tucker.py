import numpy as np
import pytest

from tensorcur import (
    frobenius_norm,
    hooi,
    hosvd,
    kronecker,
    multilinear_rank,
    relative_error,
    st_hosvd,
    unfold,
)

from conftest import random_low_rank


def noisy_instance(seed, dims=(12, 10, 11), ranks=(3, 2, 3), sigma=1e-2):
    rng = np.random.default_rng(seed)
    exact = random_low_rank(dims, ranks, rng)
    return exact + sigma * rng.standard_normal(dims), ranks


class TestHosvd:
    def test_exact_on_low_rank_input(self):
        rng = np.random.default_rng(0)
        t = random_low_rank((9, 8, 10), (2, 2, 2), rng)
        dec = hosvd(t, (2, 2, 2))
        assert relative_error(t, dec.reconstruct()) < 1e-9

    def test_full_ranks_reproduce_input(self):
        rng = np.random.default_rng(1)
        t = rng.standard_normal((4, 5, 3))
        dec = hosvd(t, t.shape)
        assert relative_error(t, dec.reconstruct()) < 1e-12

    def test_fixture_exact_at_its_rank(self, slices_3x3x2):
        dec = hosvd(slices_3x3x2, (2, 2, 2))
        assert relative_error(slices_3x3x2, dec.reconstruct()) < 1e-9

    def test_compact_default_ranks(self):
        rng = np.random.default_rng(2)
        t = random_low_rank((7, 7, 7), (2, 3, 2), rng)
        dec = hosvd(t)
        assert dec.core.shape == (2, 3, 2)

    def test_rank_exceeding_extent(self):
        with pytest.raises(ValueError):
            hosvd(np.zeros((3, 3, 3)) + 1.0, (4, 3, 3))

    def test_unfolding_identity_with_reversed_kronecker_order(self):
        # X_(k) = W_k T_(k) (W_last x ... x W_first without k)^T under the
        # first-fastest column convention
        rng = np.random.default_rng(3)
        t = random_low_rank((6, 5, 7), (2, 2, 2), rng)
        dec = hosvd(t, (2, 2, 2))
        for k in range(3):
            others = [dec.factors[m] for m in reversed(range(3)) if m != k]
            structured = others[0]
            for blk in others[1:]:
                structured = kronecker(structured, blk)
            lhs = unfold(t, k)
            rhs = dec.factors[k] @ unfold(dec.core, k) @ structured.T
            assert np.max(np.abs(lhs - rhs)) < 1e-10 * max(1.0, np.abs(lhs).max())


class TestStHosvd:
    def test_exact_on_low_rank_input(self):
        rng = np.random.default_rng(4)
        t = random_low_rank((10, 9, 8), (3, 2, 2), rng)
        dec = st_hosvd(t, (3, 2, 2))
        assert relative_error(t, dec.reconstruct()) < 1e-9

    def test_full_ranks_reproduce_input(self):
        rng = np.random.default_rng(5)
        t = rng.standard_normal((4, 4, 4))
        assert relative_error(t, st_hosvd(t, t.shape).reconstruct()) < 1e-12

    def test_error_close_to_plain_hosvd_on_noise(self):
        for seed in range(5):
            noisy, ranks = noisy_instance(seed)
            e_st = relative_error(noisy, st_hosvd(noisy, ranks).reconstruct())
            e_h = relative_error(noisy, hosvd(noisy, ranks).reconstruct())
            assert abs(e_st - e_h) <= 0.1 * e_h

    def test_core_shape_matches_ranks(self):
        rng = np.random.default_rng(6)
        t = rng.standard_normal((6, 7, 8))
        assert st_hosvd(t, (2, 3, 4)).core.shape == (2, 3, 4)


class TestHooi:
    def test_exact_input_converges_immediately(self):
        rng = np.random.default_rng(7)
        t = random_low_rank((9, 9, 9), (2, 2, 2), rng)
        dec = hooi(t, (2, 2, 2), max_iters=1)
        assert relative_error(t, dec.reconstruct()) < 1e-9

    def test_full_ranks_reproduce_input(self):
        rng = np.random.default_rng(8)
        t = rng.standard_normal((4, 3, 5))
        assert relative_error(t, hooi(t, t.shape).reconstruct()) < 1e-12

    def test_fit_nonincreasing_over_sweeps(self):
        noisy, ranks = noisy_instance(42, sigma=0.3)
        errors = []
        for sweeps in range(1, 11):
            rec = hooi(noisy, ranks, max_iters=sweeps, tol=0.0).reconstruct()
            errors.append(frobenius_norm(noisy - rec))
        for a, b in zip(errors, errors[1:]):
            assert b <= a + 1e-12

    def test_refines_hosvd(self):
        for seed in range(5):
            noisy, ranks = noisy_instance(seed, sigma=0.2)
            e_hooi = frobenius_norm(noisy - hooi(noisy, ranks).reconstruct())
            e_hosvd = frobenius_norm(noisy - hosvd(noisy, ranks).reconstruct())
            assert e_hooi <= e_hosvd + 1e-10


class TestOrthonormality:
    def test_all_methods_return_orthonormal_factors(self):
        noisy, ranks = noisy_instance(11)
        for dec in (hosvd(noisy, ranks), st_hosvd(noisy, ranks), hooi(noisy, ranks)):
            for w in dec.factors:
                assert np.linalg.norm(w.T @ w - np.eye(w.shape[1])) < 1e-10

    def test_all_methods_exact_on_exact_rank_input(self):
        rng = np.random.default_rng(12)
        t = random_low_rank((11, 10, 9), (3, 3, 3), rng)
        for method in (hosvd, st_hosvd, hooi):
            assert relative_error(t, method(t, (3, 3, 3)).reconstruct()) < 1e-9

    def test_reconstruction_has_declared_rank(self):
        rng = np.random.default_rng(13)
        t = random_low_rank((8, 8, 8), (2, 2, 2), rng)
        dec = hosvd(t, (2, 2, 2))
        assert multilinear_rank(dec.reconstruct()) == (2, 2, 2)
