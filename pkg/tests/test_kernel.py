"""Numerical kernel: randomness, eigensolvers, charts, canonical forms."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shadowgeom.kernel import (
    CapacityError,
    RandomSource,
    canonical_sign,
    dedup_rows,
    hyperplane_basis,
    isotropy_residuals,
    jacobi_eigh,
    nullspace_basis,
    psd_sqrt,
    random_orthogonal,
    sample_unit_sphere,
    unit_ball_volume,
)


class TestRandomSource:
    def test_same_seed_same_stream(self):
        a = RandomSource(123).generator().standard_normal(8)
        b = RandomSource(123).generator().standard_normal(8)
        assert np.array_equal(a, b)

    def test_generator_is_fresh_each_call(self):
        src = RandomSource(9)
        assert np.array_equal(src.generator().standard_normal(4), src.generator().standard_normal(4))

    def test_forks_are_decorrelated_and_reproducible(self):
        src = RandomSource(77)
        a = src.fork(1).generator().standard_normal(6)
        b = src.fork(2).generator().standard_normal(6)
        assert not np.array_equal(a, b)
        assert np.array_equal(a, RandomSource(77).fork(1).generator().standard_normal(6))

    def test_seed_range_enforced(self):
        with pytest.raises(ValueError):
            RandomSource(-1)
        with pytest.raises(ValueError):
            RandomSource(2**64)
        RandomSource(2**64 - 1)

    def test_algorithm_pinned(self):
        with pytest.raises(ValueError):
            RandomSource(0, algorithm="mt19937")


class TestJacobiEigh:
    def test_matches_numpy_on_random_symmetric(self):
        gen = RandomSource(10).generator()
        for k in range(10):
            a = gen.standard_normal((5, 5))
            sym = 0.5 * (a + a.T)
            vals, vecs = jacobi_eigh(sym)
            ref = np.sort(np.linalg.eigvalsh(sym))
            assert np.allclose(np.sort(vals), ref, atol=1e-12)
            assert np.allclose(vecs @ np.diag(vals) @ vecs.T, sym, atol=1e-12)
            assert np.allclose(vecs.T @ vecs, np.eye(5), atol=1e-12)

    def test_identity(self):
        vals, vecs = jacobi_eigh(np.eye(3))
        assert np.allclose(vals, 1.0)
        assert np.allclose(vecs @ vecs.T, np.eye(3), atol=1e-14)


class TestPsdSqrt:
    def test_square_of_root_recovers_matrix(self):
        gen = RandomSource(11).generator()
        a = gen.standard_normal((4, 4))
        mat = a @ a.T + 0.1 * np.eye(4)
        root = psd_sqrt(mat)
        assert np.allclose(root @ root, mat, atol=1e-10)
        assert np.allclose(root, root.T, atol=1e-12)

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            psd_sqrt(np.diag([1.0, -1.0]))


class TestSphereSampling:
    def test_unit_norms_and_shape(self):
        pts = sample_unit_sphere(4, RandomSource(5), count=100)
        assert pts.shape == (100, 4)
        assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)

    def test_single_sample(self):
        v = sample_unit_sphere(3, RandomSource(5))
        assert v.shape == (3,)
        assert abs(np.linalg.norm(v) - 1.0) <= 1e-12


class TestUnitBallVolume:
    def test_known_values(self):
        assert unit_ball_volume(1) == pytest.approx(2.0, abs=1e-15)
        assert unit_ball_volume(2) == pytest.approx(math.pi, abs=1e-14)
        assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, abs=1e-14)
        assert unit_ball_volume(4) == pytest.approx(math.pi**2 / 2.0, abs=1e-14)

    def test_recurrence(self):
        # v_n = v_{n-1} * Beta-ratio recurrence: v_n = v_{n-1} * sqrt(pi) * G((n+1)/2)/G(n/2+1)
        for n in range(2, 30):
            ratio = unit_ball_volume(n) / unit_ball_volume(n - 1)
            expected = math.sqrt(math.pi) * math.exp(math.lgamma((n + 1) / 2) - math.lgamma(n / 2 + 1))
            assert ratio == pytest.approx(expected, rel=1e-13)


class TestCharts:
    def test_hyperplane_basis_orthonormal_and_orthogonal(self):
        gen = RandomSource(12).generator()
        for _ in range(20):
            v = gen.standard_normal(5)
            basis = hyperplane_basis(v)
            assert basis.shape == (5, 4)
            assert np.allclose(basis.T @ basis, np.eye(4), atol=1e-12)
            assert np.allclose(basis.T @ v, 0.0, atol=1e-10 * np.linalg.norm(v))

    def test_nullspace_basis(self):
        rows = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        ns = nullspace_basis(rows)
        assert ns.shape == (3, 1)
        assert np.allclose(rows @ ns, 0.0, atol=1e-12)

    def test_random_orthogonal(self):
        gen = RandomSource(13).generator()
        q = random_orthogonal(4, gen)
        assert np.allclose(q @ q.T, np.eye(4), atol=1e-12)


class TestCanonicalForms:
    def test_canonical_sign_flips_consistently(self):
        v = np.array([0.0, -2.0, 1.0])
        assert canonical_sign(v) == -1.0
        assert canonical_sign(-v) == 1.0
        assert canonical_sign(np.zeros(3)) == 1.0

    def test_dedup_rows_merges_near_duplicates(self):
        pts = np.array([[0.0, 0.0], [1.0, 1.0], [1.0 + 1e-10, 1.0], [2.0, 0.0]])
        out = dedup_rows(pts, tol=1e-8)
        assert len(out) == 3

    @given(st.integers(min_value=0, max_value=2**32))
    def test_dedup_idempotent(self, seed):
        pts = RandomSource(seed).generator().standard_normal((12, 3))
        once = dedup_rows(pts, tol=1e-8)
        twice = dedup_rows(once, tol=1e-8)
        assert np.array_equal(once, twice)


class TestIsotropyResiduals:
    def test_orthonormal_frame_is_exact(self):
        frob, gap = isotropy_residuals(np.eye(4), np.ones(4))
        assert frob <= 1e-15
        assert abs(gap) <= 1e-15

    def test_perturbed_weight_reports_linearly(self):
        w = np.ones(3)
        w[2] += 1e-3
        frob, gap = isotropy_residuals(np.eye(3), w)
        assert frob == pytest.approx(1e-3, rel=1e-9)
        assert gap == pytest.approx(1e-3, rel=1e-9)


def test_capacity_error_carries_best():
    err = CapacityError("limit reached", best={"volume": 1.0})
    assert err.best == {"volume": 1.0}
    assert isinstance(err, RuntimeError)
