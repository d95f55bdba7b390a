"""Shadow minimization, repositioning pipeline, product inequality, ball ratio."""

import math

import numpy as np
import pytest

import shadowgeom.shadow as shadow_mod
from oracles import support_minimum_sampled
from shadowgeom.kernel import CapacityError, RandomSource, sample_unit_sphere
from shadowgeom.polytope import SymmetricHPolytope, random_symmetric_polytope
from shadowgeom.shadow import (
    ball_shadow_ratio,
    loomis_whitney_check,
    min_shadow_direction,
    minimize_support,
    polar_vertices,
    shadow_position,
    verify_product_inequality,
    zonotope_facet_normals,
)
from shadowgeom.zonotope import WeightedDirections, Zonotope, projection_body, random_zonotope


def cube(n: int) -> SymmetricHPolytope:
    return SymmetricHPolytope(np.eye(n), np.ones(n))


def hexagon() -> SymmetricHPolytope:
    angles = np.array([0.0, math.pi / 3.0, 2.0 * math.pi / 3.0])
    u = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return SymmetricHPolytope(u, np.ones(3))


class TestFacetNormals:
    def test_cube_zonotope_normals_are_axes(self):
        normals = zonotope_facet_normals(Zonotope(np.eye(3)))
        assert normals.shape == (3, 3)
        assert np.allclose(np.sort(np.abs(normals).sum(axis=1)), 1.0)

    def test_normals_support_touches_facets(self):
        z = random_zonotope(3, 6, RandomSource(700))
        normals = zonotope_facet_normals(z)
        heights = z.supports(normals)
        assert np.all(heights > 0.0)

    def test_capacity_guard(self):
        gen = RandomSource(701).generator()
        with pytest.raises(CapacityError):
            zonotope_facet_normals(Zonotope(gen.standard_normal((21, 3))))


class TestPolarVertices:
    def test_cube_projection_body_polar_is_cross_polytope(self):
        pv = polar_vertices(projection_body(cube(3)))
        # the cube's shadow norm ball: vertices +-e_i / 4
        assert len(pv) == 6
        assert np.allclose(np.sort(np.linalg.norm(pv.vertices, axis=1)), 0.25)

    def test_vertices_on_unit_shadow_sphere(self):
        z = random_zonotope(3, 5, RandomSource(702))
        pv = polar_vertices(z)
        assert np.allclose(z.supports(pv.vertices), 1.0, atol=1e-9)

    def test_closed_under_negation(self):
        z = random_zonotope(2, 4, RandomSource(703))
        v = pv = polar_vertices(z).vertices
        for p in v:
            assert np.min(np.linalg.norm(pv + p, axis=1)) <= 1e-12


class TestMinimizeSupport:
    def test_cube_minimum_is_axis_shadow(self):
        rep = min_shadow_direction(cube(3), rng=RandomSource(704))
        assert rep.branch == "exact"
        assert rep.value == pytest.approx(4.0, rel=1e-12)
        assert np.max(np.abs(rep.direction)) == pytest.approx(1.0, abs=1e-9)

    def test_hexagon_minimum_width(self):
        rep = min_shadow_direction(hexagon(), rng=RandomSource(705))
        assert rep.value == pytest.approx(2.0, rel=1e-12)

    def test_reported_value_is_attained_and_global(self):
        body = random_symmetric_polytope(3, 6, RandomSource(706))
        rep = min_shadow_direction(body, rng=RandomSource(707))
        assert rep.branch == "exact"
        assert body.shadow_area(rep.direction) == pytest.approx(rep.value, rel=1e-9)
        sampled = float(
            np.min(body.shadow_areas(sample_unit_sphere(3, RandomSource(708), count=20_000)))
        )
        assert rep.value <= sampled + 1e-9

    def test_estimate_branch_matches_exact(self, monkeypatch):
        z = projection_body(random_symmetric_polytope(3, 6, RandomSource(709)))
        exact = minimize_support(z, rng=RandomSource(710))
        assert exact.branch == "exact"
        monkeypatch.setattr(shadow_mod, "EXACT_PATTERN_LIMIT", 2)
        est = minimize_support(z, rng=RandomSource(710))
        assert est.branch == "estimate"
        assert est.value == pytest.approx(exact.value, rel=1e-6)
        assert est.value >= exact.value - 1e-12

    def test_estimate_upper_bounds_sampled_oracle(self):
        gens = RandomSource(711).generator().standard_normal((6, 3))
        z = Zonotope(gens)
        rep = minimize_support(z, rng=RandomSource(712))
        oracle = support_minimum_sampled(gens, RandomSource(713).generator())
        assert rep.value <= oracle + 1e-9


class TestShadowPosition:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cube_is_fixed_point(self, n):
        rep = shadow_position(cube(n), rng=RandomSource(720 + n))
        assert rep.ok
        assert rep.ratio == pytest.approx(1.0, abs=1e-9)
        assert rep.volume == pytest.approx(2.0**n, rel=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_bodies_reach_the_floor(self, seed):
        n = 3 + seed % 2
        body = random_symmetric_polytope(n, n + 3 + seed, RandomSource(730 + seed))
        rep = shadow_position(body, rng=RandomSource(740 + seed))
        assert rep.ok
        assert rep.ratio >= 1.0 - 1e-4
        assert rep.branch == "exact"
        assert abs(abs(np.linalg.det(rep.transform)) - 1.0) <= 1e-9
        assert rep.body.volume == pytest.approx(body.volume, rel=1e-9)

    def test_john_residuals_within_contract(self):
        body = random_symmetric_polytope(3, 7, RandomSource(750))
        rep = shadow_position(body, rng=RandomSource(751))
        assert rep.residuals["john_frobenius"] <= 1e-6
        assert abs(rep.residuals["john_trace_gap"]) <= 1e-8

    def test_contact_directions_attain_minimum(self):
        body = random_symmetric_polytope(3, 6, RandomSource(752))
        rep = shadow_position(body, rng=RandomSource(753))
        shadows = rep.body.shadow_areas(rep.john.contacts)
        assert np.max(np.abs(shadows - rep.min_shadow)) <= 1e-6 * rep.min_shadow

    def test_affine_invariance_of_result(self):
        body = random_symmetric_polytope(3, 6, RandomSource(754))
        skew = np.array([[1.0, 0.7, 0.0], [0.0, 1.0, -0.4], [0.0, 0.0, 1.0]])
        rep_a = shadow_position(body, rng=RandomSource(755))
        rep_b = shadow_position(body.affine_image(skew), rng=RandomSource(755))
        assert rep_b.ratio == pytest.approx(rep_a.ratio, rel=1e-6)


class TestProductInequality:
    @pytest.mark.parametrize("seed", range(6))
    def test_random_pairs_respect_inequality(self, seed):
        n = 2 + seed % 3
        body = random_symmetric_polytope(n, n + 3, RandomSource(760 + seed))
        from shadowgeom.zonotope import random_weighted_directions

        dec = random_weighted_directions(n, RandomSource(770 + seed), bases=2)
        rep = verify_product_inequality(body, dec)
        assert rep.ratio >= 1.0 - 1e-9

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_box_orthonormal_equality(self, n):
        gen = RandomSource(780 + n).generator()
        half_widths = gen.uniform(0.5, 2.0, size=n)
        body = SymmetricHPolytope(np.eye(n), half_widths)
        rep = loomis_whitney_check(body)
        assert abs(rep.ratio - 1.0) <= 1e-9

    def test_perturbed_decomposition_rejected(self):
        dec = WeightedDirections(np.eye(3), np.array([1.0, 1.0, 1.001]))
        with pytest.raises(ValueError):
            verify_product_inequality(cube(3), dec)

    def test_dimension_mismatch_rejected(self):
        dec = WeightedDirections(np.eye(2), np.ones(2))
        with pytest.raises(ValueError, match="dimension"):
            verify_product_inequality(cube(3), dec)


class TestBallShadowRatio:
    def test_plane_value(self):
        assert ball_shadow_ratio(2) == pytest.approx(2.0 / math.sqrt(math.pi), abs=1e-15)

    def test_space_value(self):
        # pi r^2 over (4/3 pi r^3)^(2/3) at r=1
        expected = math.pi / (4.0 * math.pi / 3.0) ** (2.0 / 3.0)
        assert ball_shadow_ratio(3) == pytest.approx(expected, rel=1e-14)
        assert ball_shadow_ratio(3) == pytest.approx(1.20900, abs=1e-5)

    def test_strictly_increasing(self):
        values = [ball_shadow_ratio(n) for n in range(2, 201)]
        assert np.all(np.diff(values) > 0.0)

    def test_large_dimension_approach_to_limit(self):
        value = ball_shadow_ratio(200)
        assert value == pytest.approx(1.6243995015984385, rel=1e-12)
        gap = (math.sqrt(math.e) - value) / math.sqrt(math.e)
        assert 0.0 < gap <= 1.49e-2

    def test_domain_guard(self):
        with pytest.raises(ValueError):
            ball_shadow_ratio(1)
        with pytest.raises(ValueError):
            ball_shadow_ratio(201)
