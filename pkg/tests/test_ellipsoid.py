"""Minimal enclosing ellipsoids and contact-point decompositions."""

import math

import numpy as np
import pytest

from shadowgeom.ellipsoid import (
    Ellipsoid,
    JohnDecomposition,
    extract_john_decomposition,
    john_residual,
    mvee_symmetric,
)
from shadowgeom.kernel import RandomSource, random_orthogonal, unit_ball_volume
from shadowgeom.polytope import random_symmetric_polytope


def cube_vertices(n: int) -> np.ndarray:
    from itertools import product

    return np.array(list(product((-1.0, 1.0), repeat=n)))


class TestEllipsoid:
    def test_ball_volume(self):
        ball = Ellipsoid(np.eye(3))
        assert ball.volume == pytest.approx(unit_ball_volume(3), rel=1e-12)

    def test_rejects_indefinite_shape(self):
        with pytest.raises(ValueError):
            Ellipsoid(np.diag([1.0, -1.0]))

    def test_contains(self):
        e = Ellipsoid(np.diag([1.0, 4.0]))
        inside = e.contains(np.array([[0.9, 0.0], [0.0, 0.6]]))
        assert inside.tolist() == [True, False]


class TestMveeFixtures:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cube_vertices_give_sqrt_n_ball(self, n):
        result = mvee_symmetric(cube_vertices(n), eps=1e-9)
        # by symmetry the MVEE of the cube's vertices is the ball of radius sqrt(n)
        assert np.allclose(result.ellipsoid.shape, np.eye(n) / n, atol=1e-7)

    def test_cross_polytope_vertices_give_unit_ball(self):
        pts = np.vstack([np.eye(3), -np.eye(3)])
        result = mvee_symmetric(pts, eps=1e-10)
        assert np.allclose(result.ellipsoid.shape, np.eye(3), atol=1e-8)

    def test_anisotropic_box(self):
        pts = cube_vertices(2) * np.array([3.0, 0.5])
        result = mvee_symmetric(pts, eps=1e-10)
        assert np.allclose(result.ellipsoid.shape, np.diag([1.0 / 18.0, 2.0]), atol=1e-7)


class TestMveeProperties:
    @pytest.mark.parametrize("seed", range(6))
    def test_all_points_enclosed_within_certificate(self, seed):
        n = 2 + seed % 3
        pts = random_symmetric_polytope(n, n + 3, RandomSource(500 + seed)).vertices.points
        result = mvee_symmetric(pts, eps=1e-8)
        quad = np.einsum("ij,jk,ik->i", pts, result.ellipsoid.shape, pts)
        assert float(quad.max()) <= 1.0 + 1e-7
        assert result.kappa_max <= (1.0 + 1e-8) * result.ellipsoid.dim + 1e-12

    def test_affine_covariance(self):
        pts = random_symmetric_polytope(3, 6, RandomSource(510)).vertices.points
        mat = np.array([[1.5, 0.2, 0.0], [0.0, 0.8, 0.4], [0.0, 0.0, 1.2]])
        base = mvee_symmetric(pts, eps=1e-10).ellipsoid.shape
        mapped = mvee_symmetric(pts @ mat.T, eps=1e-10).ellipsoid.shape
        inv = np.linalg.inv(mat)
        assert np.allclose(mapped, inv.T @ base @ inv, atol=1e-6)

    def test_rotation_only_rotates(self):
        pts = random_symmetric_polytope(3, 6, RandomSource(511)).vertices.points
        q = random_orthogonal(3, RandomSource(512).generator())
        base = mvee_symmetric(pts, eps=1e-10)
        rotated = mvee_symmetric(pts @ q.T, eps=1e-10)
        assert rotated.ellipsoid.volume == pytest.approx(base.ellipsoid.volume, rel=1e-8)

    def test_local_minimality_of_volume(self):
        # tightening any axis yields a strictly smaller enclosing candidate,
        # so minimality demands that some point escapes it
        pts = random_symmetric_polytope(3, 6, RandomSource(513)).vertices.points
        result = mvee_symmetric(pts, eps=1e-10)
        for k in range(3):
            scale = np.ones(3)
            scale[k] = 0.98
            h = result.ellipsoid.shape / scale[:, None] / scale[None, :]
            quad = np.einsum("ij,jk,ik->i", pts, h, pts)
            assert float(quad.max()) > 1.0, f"axis {k} tightening kept all points: not minimal"


class TestJohnDecomposition:
    @pytest.mark.parametrize("seed", range(8))
    def test_residuals_within_contract(self, seed):
        n = 2 + seed % 4
        pts = random_symmetric_polytope(n, n + 3, RandomSource(520 + seed)).vertices.points
        dec = extract_john_decomposition(mvee_symmetric(pts, eps=1e-8))
        frob, gap = dec.residuals()
        assert frob <= 1e-6
        assert abs(gap) <= 1e-8
        dec.validate()

    def test_contacts_are_unit_and_on_sphere_of_whitened_points(self):
        pts = cube_vertices(3)
        dec = extract_john_decomposition(mvee_symmetric(pts, eps=1e-9))
        assert np.allclose(np.linalg.norm(dec.contacts, axis=1), 1.0, atol=1e-9)

    def test_cube_contacts_align_with_diagonals(self):
        pts = cube_vertices(2)
        dec = extract_john_decomposition(mvee_symmetric(pts, eps=1e-10))
        expected = np.abs(np.full((len(dec.contacts), 2), 1.0 / math.sqrt(2.0)))
        assert np.allclose(np.abs(dec.contacts), expected, atol=1e-6)

    def test_john_residual_report(self):
        pts = random_symmetric_polytope(3, 6, RandomSource(530)).vertices.points
        dec = extract_john_decomposition(mvee_symmetric(pts, eps=1e-9))
        rep = john_residual(dec)
        assert rep.frobenius <= 1e-6
        assert abs(rep.trace_gap) <= 1e-8
        assert rep.quadratic_max_relative <= 1e-6

    def test_perturbed_weight_reports_trace_gap(self):
        dec = JohnDecomposition(np.eye(3), np.array([1.0, 1.0, 1.0 + 1e-3]))
        frob, gap = dec.residuals()
        assert gap == pytest.approx(1e-3, rel=1e-9)
        with pytest.raises(ValueError):
            dec.validate()

    def test_validate_rejects_non_unit_contacts(self):
        dec = JohnDecomposition(1.1 * np.eye(3), np.ones(3))
        with pytest.raises(ValueError, match="unit"):
            dec.validate()
