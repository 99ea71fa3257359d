from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from depthkit import (
    AxisParallel,
    BallComplements,
    BudgetError,
    ConeOrder,
    DepthRegion,
    DimensionError,
    HalfspaceAll,
    ParameterError,
    WeightedSample,
    axis_center,
    axis_depth,
    axis_interval,
    axis_region,
    center,
    halfspace_center,
    halfspace_depth_2d,
    halfspace_region,
    max_depth_bound,
    median_set,
    region,
)

from support import (
    dyadic_points,
    dyadic_weights,
    exact_level_ring,
    primitive_directions,
    vertex_sets_match,
)


def membership_grid(sample, pad=0.5, step=0.25):
    lo = sample.points.min(axis=0) - pad
    hi = sample.points.max(axis=0) + pad
    xs = np.arange(lo[0], hi[0] + step / 2, step)
    ys = np.arange(lo[1], hi[1] + step / 2, step)
    return [(float(x), float(y)) for x in xs for y in ys]


class TestDepthRegion:
    def test_polygon_contains(self):
        r = DepthRegion("polygon", Fraction(1, 3),
                        ((-1.0, 0.0), (1.0, 0.0), (0.0, 1.0)))
        assert r.contains((0.0, 0.5))
        assert r.contains((0.0, 0.0))          # edge
        assert r.contains((1.0, 0.0))          # vertex
        assert not r.contains((0.0, -0.05))
        assert not r.is_empty

    def test_segment_and_point_regions(self):
        seg = DepthRegion("polygon", Fraction(1, 2), ((0.0, 0.0), (2.0, 2.0)))
        assert seg.contains((1.0, 1.0))
        assert not seg.contains((1.0, 1.1))
        pt = DepthRegion("polygon", Fraction(1, 2), ((3.0, 4.0),))
        assert pt.contains((3.0, 4.0))
        assert not pt.contains((3.0, 4.1))

    def test_empty_region(self):
        r = DepthRegion("polygon", Fraction(1, 1), ())
        assert r.is_empty
        assert not r.contains((0.0, 0.0))

    def test_payload_shape(self):
        r = DepthRegion("box", Fraction(2, 3), ((0.0, 0.0),))
        p = r.to_payload()
        assert p["kind"] == "box"
        assert p["alpha"] == pytest.approx(2.0 / 3.0)
        assert p["vertices"] == [[0.0, 0.0]]


class TestHalfspaceRegion:
    def test_triangle_at_one_third_is_the_hull(self, triangle):
        r = halfspace_region(triangle, Fraction(1, 3))
        assert vertex_sets_match(r.vertices,
                                 [(-1.0, 0.0), (1.0, 0.0), (0.0, 1.0)], 1e-12)

    def test_above_max_depth_is_empty(self, triangle):
        assert halfspace_region(triangle, Fraction(1, 3) + Fraction(1, 100)).is_empty
        assert halfspace_region(triangle, 1).is_empty

    def test_small_alpha_matches_hull(self, triangle):
        r = halfspace_region(triangle, Fraction(1, 100))
        assert vertex_sets_match(r.vertices,
                                 [(-1.0, 0.0), (1.0, 0.0), (0.0, 1.0)], 1e-12)

    def test_membership_matches_pointwise_depth(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(3, 13))
            pts = rng.integers(-8, 9, size=(n, 2)).astype(float) / 4.0
            ws = dyadic_weights(rng, n) if rng.integers(2) else None
            s = WeightedSample(pts, ws)
            total = s.weight_denominator
            alpha = Fraction(int(rng.integers(1, total + 1)), total)
            r = halfspace_region(s, alpha)
            for g in membership_grid(s):
                inside = halfspace_depth_2d(s, g).value >= alpha
                assert r.contains(g) == inside, (s.points, alpha, g)

    def test_collinear_sample_gives_segment(self):
        s = WeightedSample([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)])
        r = halfspace_region(s, Fraction(2, 4))
        assert vertex_sets_match(r.vertices, [(1.0, 1.0), (2.0, 2.0)], 1e-12)

    def test_single_atom(self):
        s = WeightedSample([(2.0, -1.0)])
        r = halfspace_region(s, 1)
        assert r.vertices == ((2.0, -1.0),)

    def test_vertices_are_a_canonical_ring(self, triangle):
        r = halfspace_region(triangle, Fraction(1, 3))
        v = np.asarray(r.vertices)
        # counter-clockwise and started at the lексicographic minimum
        area2 = 0.0
        for i in range(len(v)):
            j = (i + 1) % len(v)
            area2 += v[i, 0] * v[j, 1] - v[j, 0] * v[i, 1]
        assert area2 > 0
        assert min(range(len(v)), key=lambda k: (v[k, 0], v[k, 1])) == 0

    def test_alpha_validation_and_budget(self, triangle):
        with pytest.raises(ParameterError):
            halfspace_region(triangle, 0)
        with pytest.raises(ParameterError):
            halfspace_region(triangle, Fraction(3, 2))
        big = WeightedSample(np.random.default_rng(0).normal(size=(201, 2)))
        with pytest.raises(BudgetError):
            halfspace_region(big, Fraction(1, 4))

    def test_affine_equivariance_spot(self, triangle):
        a = np.array([[2.0, 1.0], [0.5, 1.5]])
        b = np.array([3.0, -2.0])
        r = halfspace_region(triangle, Fraction(1, 3))
        s2 = WeightedSample(triangle.points @ a.T + b)
        r2 = halfspace_region(s2, Fraction(1, 3))
        mapped = [tuple(a @ np.asarray(v) + b) for v in r.vertices]
        assert vertex_sets_match(r2.vertices, mapped, 1e-9)


class TestHalfspaceCenter:
    def test_triangle_center(self, triangle):
        alpha_max, reg = halfspace_center(triangle)
        assert alpha_max == Fraction(1, 3)
        assert vertex_sets_match(reg.vertices,
                                 [(-1.0, 0.0), (1.0, 0.0), (0.0, 1.0)], 1e-12)

    def test_four_point_square(self):
        # both diagonal directions force x+y = 1 and x-y = 0 at level 2/4
        s = WeightedSample([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)])
        alpha_max, reg = halfspace_center(s)
        assert alpha_max == Fraction(2, 4)
        assert vertex_sets_match(reg.vertices, [(0.5, 0.5)], 1e-12)

    def test_center_level_is_maximal(self):
        rng = np.random.default_rng(13)
        for _ in range(40):
            n = int(rng.integers(3, 21))
            s = WeightedSample(dyadic_points(rng, n),
                               dyadic_weights(rng, n) if rng.integers(2) else None)
            alpha_max, reg = halfspace_center(s)
            assert not reg.is_empty
            # a fat region's centroid is robustly interior; thin regions can
            # round off the level set entirely and are checked by the oracle
            v = np.asarray(reg.vertices)
            if len(v) >= 3:
                area2 = sum(v[i, 0] * v[(i + 1) % len(v), 1]
                            - v[(i + 1) % len(v), 0] * v[i, 1]
                            for i in range(len(v)))
                if area2 > 1e-9:
                    c = v.mean(axis=0)
                    assert halfspace_depth_2d(s, c).value == alpha_max
            # one grain more mass is infeasible
            total = s.weight_denominator
            bump = Fraction(int(alpha_max * total) + 1, total)
            if bump <= 1:
                assert halfspace_region(s, bump).is_empty

    def test_center_matches_exact_rational_oracle(self):
        rng = np.random.default_rng(29)
        for _ in range(12):
            n = int(rng.integers(3, 13))
            s = WeightedSample(dyadic_points(rng, n),
                               dyadic_weights(rng, n) if rng.integers(2) else None)
            alpha_max, reg = halfspace_center(s)
            total = s.weight_denominator
            level = alpha_max.numerator * (total // alpha_max.denominator)
            ring = exact_level_ring(s, level)
            assert ring, "oracle says the reported level is infeasible"
            if level < total:
                assert not exact_level_ring(s, level + 1)
            # same convex set: equal support values over every direction
            # that can carry an edge of either polygon
            dirs = primitive_directions(s) + [(1, 0), (-1, 0), (0, 1), (0, -1)]
            for ux, uy in dirs:
                norm = math.hypot(ux, uy)
                mine = max(ux * x + uy * y for x, y in reg.vertices) / norm
                ref = max(float(ux * x + uy * y) for x, y in ring) / norm
                assert mine == pytest.approx(ref, abs=1e-9)

    def test_region_matches_exact_rational_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(12):
            n = int(rng.integers(3, 13))
            s = WeightedSample(dyadic_points(rng, n),
                               dyadic_weights(rng, n) if rng.integers(2) else None)
            total = s.weight_denominator
            level = int(rng.integers(1, total + 1))
            reg = halfspace_region(s, Fraction(level, total))
            ring = exact_level_ring(s, level)
            if reg.is_empty or not ring:
                assert reg.is_empty and not ring
                continue
            dirs = primitive_directions(s) + [(1, 0), (-1, 0), (0, 1), (0, -1)]
            for ux, uy in dirs:
                norm = math.hypot(ux, uy)
                mine = max(ux * x + uy * y for x, y in reg.vertices) / norm
                ref = max(float(ux * x + uy * y) for x, y in ring) / norm
                assert mine == pytest.approx(ref, abs=1e-9)

    def test_collinear_center_is_the_median_segment(self):
        s = WeightedSample([(k, 2.0 * k) for k in range(4)])
        alpha_max, reg = halfspace_center(s)
        assert alpha_max == Fraction(2, 4)
        assert vertex_sets_match(reg.vertices, [(1.0, 2.0), (2.0, 4.0)], 1e-12)

    def test_dimension_guard(self):
        with pytest.raises(DimensionError):
            halfspace_center(WeightedSample([0.0, 1.0]))


class TestAxisFamilies:
    def test_axis_interval_at_half_is_the_median_box(self):
        rng = np.random.default_rng(19)
        for _ in range(30):
            n = int(rng.integers(1, 16))
            s = WeightedSample(dyadic_points(rng, n),
                               dyadic_weights(rng, n) if rng.integers(2) else None)
            order = (ConeOrder.identity(2) if rng.integers(2)
                     else ConeOrder.rotation(float(rng.integers(8)) * math.pi / 8))
            got = axis_interval(s, Fraction(1, 2), order)
            want = median_set(s, order)
            assert got.lower == want.lower and got.upper == want.upper

    def test_axis_region_membership(self):
        rng = np.random.default_rng(43)
        order = ConeOrder.identity(2)
        for _ in range(20):
            n = int(rng.integers(2, 12))
            s = WeightedSample(dyadic_points(rng, n))
            total = s.weight_denominator
            alpha = Fraction(int(rng.integers(1, total + 1)), total)
            reg = axis_region(s, alpha, order)
            box = axis_interval(s, alpha, order)
            for g in membership_grid(s):
                inside = axis_depth(s, g, order).value >= alpha
                assert reg.contains(g) == inside
                if not box.is_empty():
                    assert box.contains(g) == inside

    def test_axis_region_empty_above_max(self, triangle):
        order = ConeOrder.identity(2)
        alpha_max, _ = axis_center(triangle, order)
        bump = alpha_max + Fraction(1, 100)
        assert axis_region(triangle, bump, order).is_empty

    def test_axis_center_triangle(self, triangle):
        alpha_max, reg = axis_center(triangle, ConeOrder.identity(2))
        assert alpha_max == Fraction(2, 3)
        assert reg.vertices == ((0.0, 0.0),)

    def test_axis_center_attains_value(self):
        rng = np.random.default_rng(53)
        order = ConeOrder.identity(2)
        for _ in range(30):
            n = int(rng.integers(1, 15))
            s = WeightedSample(dyadic_points(rng, n))
            alpha_max, reg = axis_center(s, order)
            assert not reg.is_empty
            corners = (reg.vertices if len(reg.vertices) > 1 else [reg.vertices[0]])
            for v in corners:
                assert axis_depth(s, v, order).value == alpha_max

    def test_rotated_box_region_vertices(self):
        s = WeightedSample([(0.0, 0.0), (1.0, 1.0), (-1.0, 1.0), (0.0, 2.0)])
        order = ConeOrder.rotation(math.pi / 4)
        reg = axis_region(s, Fraction(2, 4), order)
        assert vertex_sets_match(reg.vertices,
                                 [(0.0, 0.0), (1.0, 1.0), (0.0, 2.0), (-1.0, 1.0)],
                                 1e-9)


class TestMaxDepthBound:
    def test_line_sample(self):
        rep = max_depth_bound(WeightedSample([0.0, 1.0, 2.0]))
        assert rep.dim == 1 and rep.bound == Fraction(1, 2)
        assert rep.alpha_max == Fraction(2, 3) and rep.satisfied and rep.exact
        assert rep.witness == (1.0,)

    def test_triangle(self, triangle):
        rep = max_depth_bound(triangle)
        assert rep.bound == Fraction(1, 3)
        assert rep.alpha_max == Fraction(1, 3)
        assert rep.satisfied and rep.exact

    def test_spatial_sample_certifies_with_inexact_flag(self):
        verts = [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0),
                 (-1.0, -1.0, 1.0)]
        rep = max_depth_bound(WeightedSample(verts))
        assert rep.dim == 3 and rep.bound == Fraction(1, 4)
        assert rep.alpha_max >= Fraction(1, 4) and rep.satisfied
        assert not rep.exact

    def test_dimension_budget(self):
        with pytest.raises(BudgetError):
            max_depth_bound(WeightedSample(np.eye(4)))


class TestDispatchers:
    def test_region_by_family(self, triangle):
        order = ConeOrder.identity(2)
        a = region(triangle, Fraction(1, 3), HalfspaceAll())
        b = halfspace_region(triangle, Fraction(1, 3))
        assert a.vertices == b.vertices
        c = region(triangle, Fraction(1, 2), AxisParallel(order))
        d = axis_region(triangle, Fraction(1, 2), order)
        assert c.vertices == d.vertices

    def test_center_by_family(self, triangle):
        a, _ = center(triangle, HalfspaceAll())
        assert a == Fraction(1, 3)
        b, _ = center(triangle, AxisParallel(ConeOrder.identity(2)))
        assert b == Fraction(2, 3)

    def test_ball_family_has_no_regions(self, triangle):
        with pytest.raises(ParameterError):
            region(triangle, Fraction(1, 4), BallComplements(1.0))
        with pytest.raises(ParameterError):
            center(triangle, BallComplements(1.0))
