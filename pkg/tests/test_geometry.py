"""Geometry primitives against closed-form values and sampling oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from deepc_guidance.geometry import (
    Ellipse,
    Obstacle,
    Point2,
    SecurityCircle,
    circumscribed_polygon,
    dist,
    distance_to_ellipse,
    ellipse_outward_normal,
    inflate,
    nearest_boundary_point,
    point_in_ellipse,
    ray_ellipse_intersection,
    security_circle,
    segment_cuts_ellipse_interior,
    segment_ellipse_span,
    segment_intersects_ellipse,
    tangent_points,
    wrap_angle,
)

UNIT_CIRCLE = Ellipse(Point2(0.0, 0.0), 1.0, 1.0, 0.0)


def sample_boundary(e: Ellipse, n: int) -> np.ndarray:
    """Dense parametric boundary samples, shape (n, 2). Oracle helper."""
    t = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    lx = e.a * np.cos(t)
    ly = e.b * np.sin(t)
    ct, st = math.cos(e.theta), math.sin(e.theta)
    x = e.center.x + ct * lx - st * ly
    y = e.center.y + st * lx + ct * ly
    return np.column_stack([x, y])


def points_in_ellipse_np(xy: np.ndarray, e: Ellipse) -> np.ndarray:
    """Vectorized boundary-inclusive containment, independent of point_in_ellipse."""
    ct, st = math.cos(e.theta), math.sin(e.theta)
    dx = xy[:, 0] - e.center.x
    dy = xy[:, 1] - e.center.y
    lx = (ct * dx + st * dy) / e.a
    ly = (-st * dx + ct * dy) / e.b
    return lx * lx + ly * ly <= 1.0


def oracle_distance(p: Point2, e: Ellipse, n: int = 10_000) -> float:
    """Unsigned distance via dense parametric scan plus local refinement."""
    from scipy.optimize import minimize_scalar

    t = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    ct, st = math.cos(e.theta), math.sin(e.theta)

    def at(tv):
        lx = e.a * np.cos(tv)
        ly = e.b * np.sin(tv)
        return e.center.x + ct * lx - st * ly, e.center.y + st * lx + ct * ly

    x, y = at(t)
    d2 = (x - p.x) ** 2 + (y - p.y) ** 2
    k = int(np.argmin(d2))
    span = 2.0 * math.pi / n

    def f(tv):
        xx, yy = at(tv)
        return (xx - p.x) ** 2 + (yy - p.y) ** 2

    res = minimize_scalar(f, bounds=(t[k] - span, t[k] + span), method="bounded",
                          options={"xatol": 1e-12})
    return math.sqrt(min(float(res.fun), float(d2[k])))


class TestWrapAngle:
    def test_range(self):
        for a in [-10.0, -math.pi, -1.0, 0.0, 1.0, math.pi, 10.0, 6.0, -6.0]:
            w = wrap_angle(a)
            assert -math.pi < w <= math.pi

    def test_pi_maps_to_pi(self):
        assert wrap_angle(math.pi) == pytest.approx(math.pi)
        assert wrap_angle(-math.pi) == pytest.approx(math.pi)

    @given(st.floats(-1e6, 1e6))
    @settings(max_examples=200, deadline=None)
    def test_congruent(self, a):
        w = wrap_angle(a)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-6)
        assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-6)


class TestPointInEllipse:
    def test_center(self):
        assert point_in_ellipse(Point2(0, 0), Ellipse(Point2(0, 0), 2, 1, 0))

    def test_outside_major_axis(self):
        assert not point_in_ellipse(Point2(3, 0), Ellipse(Point2(0, 0), 2, 1, 0))

    def test_rotation_maps_major_onto_y(self):
        assert point_in_ellipse(Point2(0, 1.5), Ellipse(Point2(0, 0), 2, 1, math.pi / 2))

    def test_invalid_axes_rejected(self):
        with pytest.raises(ValueError):
            Ellipse(Point2(0, 0), 1.0, 2.0, 0.0)
        with pytest.raises(ValueError):
            Ellipse(Point2(0, 0), 1.0, -1.0, 0.0)


class TestSegmentIntersectsEllipse:
    def test_through_center(self):
        assert segment_intersects_ellipse(Point2(-3, 0), Point2(3, 0), UNIT_CIRCLE)

    def test_clear_above(self):
        assert not segment_intersects_ellipse(Point2(-3, 2), Point2(3, 2), UNIT_CIRCLE)

    def test_tangent_counts(self):
        assert segment_intersects_ellipse(Point2(-3, 1), Point2(3, 1), UNIT_CIRCLE)

    def test_tangent_does_not_cut_interior(self):
        assert not segment_cuts_ellipse_interior(Point2(-3, 1), Point2(3, 1), UNIT_CIRCLE)
        assert segment_cuts_ellipse_interior(Point2(-3, 0.5), Point2(3, 0.5), UNIT_CIRCLE)

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            segment_intersects_ellipse(Point2(1, 1), Point2(1, 1), UNIT_CIRCLE)

    def test_against_dense_sampling_oracle(self):
        rng = np.random.default_rng(1234)
        disagreements = 0
        for _ in range(300):
            e = Ellipse(Point2(*rng.uniform(-5, 5, 2)),
                        a=float(rng.uniform(0.5, 4.0)) + 1.0,
                        b=float(rng.uniform(0.3, 1.0)),
                        theta=float(rng.uniform(0, math.pi)))
            p1 = Point2(*rng.uniform(-12, 12, 2))
            p2 = Point2(*rng.uniform(-12, 12, 2))
            if p1 == p2:
                continue
            ts = np.linspace(0.0, 1.0, 10_000)
            xy = np.column_stack([p1.x + ts * (p2.x - p1.x), p1.y + ts * (p2.y - p1.y)])
            sampled = bool(points_in_ellipse_np(xy, e).any())
            exact = segment_intersects_ellipse(p1, p2, e)
            if sampled != exact:
                # only near-tangent slivers may disagree
                dmin = min(abs(distance_to_ellipse(Point2(*q), e)) for q in xy)
                assert dmin < 1e-6
                disagreements += 1
        assert disagreements <= 3

    def test_span_matches_circle_chord(self):
        span = segment_ellipse_span(Point2(-2, 0), Point2(2, 0), UNIT_CIRCLE)
        assert span is not None
        t_in, t_out = span
        assert t_in == pytest.approx(0.25, abs=1e-12)
        assert t_out == pytest.approx(0.75, abs=1e-12)
        assert segment_ellipse_span(Point2(-2, 3), Point2(2, 3), UNIT_CIRCLE) is None


class TestInflate:
    def test_zero_margin_identity(self):
        e = Ellipse(Point2(0, 0), 2, 1, 0)
        assert inflate(e, 0.0) == e

    def test_additive(self):
        assert inflate(Ellipse(Point2(0, 0), 2, 1, 0), 1.0) == Ellipse(Point2(0, 0), 3, 2, 0)

    def test_center_angle_preserved(self):
        e = inflate(Ellipse(Point2(5, 5), 4, 2, 1.0), 0.5)
        assert e == Ellipse(Point2(5, 5), 4.5, 2.5, 1.0)

    def test_negative_margin_rejected(self):
        with pytest.raises(ValueError):
            inflate(UNIT_CIRCLE, -0.1)

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 2))
    @settings(max_examples=100, deadline=None)
    def test_monotone_containment(self, px, py, margin):
        e = Ellipse(Point2(0.5, -0.25), 2.0, 1.0, 0.7)
        p = Point2(px, py)
        if point_in_ellipse(p, e):
            assert point_in_ellipse(p, inflate(e, margin))


class TestCircumscribedPolygon:
    def test_unit_circle_square(self):
        pts = circumscribed_polygon(UNIT_CIRCLE, 4)
        assert len(pts) == 4
        for p in pts:
            assert math.hypot(p.x, p.y) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_contains_dense_boundary(self):
        e = Ellipse(Point2(1, -2), 3.0, 1.2, 0.9)
        boundary = sample_boundary(e, 1024)
        for n in (3, 5, 8, 16, 64):
            poly = circumscribed_polygon(e, n)
            # point-in-convex-polygon: all cross products same sign
            px = np.array([p.x for p in poly])
            py = np.array([p.y for p in poly])
            ex = np.roll(px, -1) - px
            ey = np.roll(py, -1) - py
            inside = np.ones(len(boundary), dtype=bool)
            for i in range(n):
                rel = ex[i] * (boundary[:, 1] - py[i]) - ey[i] * (boundary[:, 0] - px[i])
                inside &= rel >= -1e-9
            assert inside.all()

    def test_vertices_outside_ellipse(self):
        e = Ellipse(Point2(0, 0), 2, 1, 0)
        for p in circumscribed_polygon(e, 8):
            assert distance_to_ellipse(p, e) >= -1e-12

    def test_too_few_vertices(self):
        with pytest.raises(ValueError):
            circumscribed_polygon(UNIT_CIRCLE, 2)


class TestTangentPoints:
    def test_closed_form_east(self):
        left, right = tangent_points(Point2(2, 0), SecurityCircle(Point2(0, 0), 1.0))
        assert left.x == pytest.approx(0.5, abs=1e-12)
        assert left.y == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
        assert right.x == pytest.approx(0.5, abs=1e-12)
        assert right.y == pytest.approx(-math.sqrt(3) / 2, abs=1e-12)

    def test_closed_form_north(self):
        left, right = tangent_points(Point2(0, 2), SecurityCircle(Point2(0, 0), 1.0))
        assert left.x == pytest.approx(-math.sqrt(3) / 2, abs=1e-12)
        assert left.y == pytest.approx(0.5, abs=1e-12)
        assert right.x == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
        assert right.y == pytest.approx(0.5, abs=1e-12)

    def test_limit_at_boundary(self):
        eps = 1e-9
        left, right = tangent_points(Point2(1 + eps, 0), SecurityCircle(Point2(0, 0), 1.0))
        assert dist(left, Point2(1, 0)) < 1e-4
        assert dist(right, Point2(1, 0)) < 1e-4

    def test_inside_rejected(self):
        with pytest.raises(ValueError):
            tangent_points(Point2(0.5, 0), SecurityCircle(Point2(0, 0), 1.0))

    @given(st.floats(-8, 8), st.floats(-8, 8), st.floats(0.5, 3.0))
    @settings(max_examples=200, deadline=None)
    def test_tangency_properties(self, px, py, radius):
        c = SecurityCircle(Point2(1.0, -2.0), radius)
        p = Point2(px, py)
        d = dist(p, c.center)
        if d <= radius * 1.001:
            return
        for t in tangent_points(p, c):
            assert dist(t, c.center) == pytest.approx(radius, abs=1e-9)
            # segment p-t touches the circle at exactly one point: the line
            # through p and t has distance exactly radius from the center
            seg_dx = t.x - p.x
            seg_dy = t.y - p.y
            seg_len = math.hypot(seg_dx, seg_dy)
            perp = abs(seg_dx * (c.center.y - p.y) - seg_dy * (c.center.x - p.x)) / seg_len
            assert perp == pytest.approx(radius, rel=1e-9, abs=1e-9)


class TestRayEllipse:
    def test_exits_major_axis(self):
        e = Ellipse(Point2(0, 0), 2, 1, 0)
        hit = ray_ellipse_intersection(Point2(0, 0), Point2(1, 0), e)
        assert hit == pytest.approx((2.0, 0.0))

    def test_exits_minor_axis(self):
        e = Ellipse(Point2(0, 0), 2, 1, 0)
        hit = ray_ellipse_intersection(Point2(0, 0), Point2(0, 1), e)
        assert hit == pytest.approx((0.0, 1.0))

    def test_pointing_away(self):
        e = Ellipse(Point2(0, 0), 2, 1, 0)
        assert ray_ellipse_intersection(Point2(5, 0), Point2(1, 0), e) is None

    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError):
            ray_ellipse_intersection(Point2(0, 0), Point2(0, 0), UNIT_CIRCLE)

    def test_from_center_always_hits(self):
        rng = np.random.default_rng(7)
        e = Ellipse(Point2(3, -1), 4.0, 1.5, 0.4)
        for _ in range(50):
            ang = rng.uniform(0, 2 * math.pi)
            d = Point2(math.cos(ang), math.sin(ang))
            hit = ray_ellipse_intersection(e.center, d, e)
            assert hit is not None
            assert abs(distance_to_ellipse(hit, e)) < 1e-9


class TestSecurityCircleOp:
    def test_a_plus_margin(self):
        o = Obstacle("o1", Ellipse(Point2(0, 0), 2, 1, 0))
        assert security_circle(o, 1.0) == SecurityCircle(Point2(0, 0), 3.0)

    def test_circle_zero_margin(self):
        o = Obstacle("o2", Ellipse(Point2(0, 0), 5, 5, 0))
        assert security_circle(o, 0.0).radius == 5.0

    def test_theta_irrelevant(self):
        o = Obstacle("o3", Ellipse(Point2(1, 1), 4, 2, 0.7))
        c = security_circle(o, 2.0)
        assert c.center == Point2(1, 1)
        assert c.radius == 6.0

    def test_contains_ellipse(self):
        e = Ellipse(Point2(2, 3), 3.0, 1.0, 1.1)
        c = security_circle(Obstacle("x", e), 0.0)
        for q in sample_boundary(e, 256):
            assert math.hypot(q[0] - c.center.x, q[1] - c.center.y) <= c.radius + 1e-9


class TestDistanceToEllipse:
    def test_outside_circle(self):
        assert distance_to_ellipse(Point2(3, 0), UNIT_CIRCLE) == pytest.approx(2.0, abs=1e-9)

    def test_center_depth(self):
        assert distance_to_ellipse(Point2(0, 0), UNIT_CIRCLE) == pytest.approx(-1.0, abs=1e-9)

    def test_against_fine_parametric_scan(self):
        # single high-resolution cross-check of the documented kind
        e = Ellipse(Point2(0, 0), 2, 1, 0)
        p = Point2(3, 4)
        t = np.linspace(0.0, 2 * math.pi, 1_000_000, endpoint=False)
        d = np.sqrt((2 * np.cos(t) - p.x) ** 2 + (np.sin(t) - p.y) ** 2)
        assert distance_to_ellipse(p, e) == pytest.approx(float(d.min()), abs=1e-6)

    def test_random_cases_against_oracle(self):
        rng = np.random.default_rng(99)
        for _ in range(200):
            e = Ellipse(Point2(*rng.uniform(-3, 3, 2)),
                        a=float(rng.uniform(1.0, 5.0)),
                        b=float(rng.uniform(0.2, 1.0)),
                        theta=float(rng.uniform(0, math.pi)))
            p = Point2(*rng.uniform(-8, 8, 2))
            got = abs(distance_to_ellipse(p, e))
            want = oracle_distance(p, e)
            assert got == pytest.approx(want, abs=1e-6)

    def test_interior_points_near_evolute(self):
        # inside an elongated ellipse the nearest-point problem has several
        # critical points; the monotone solver must still find the global one
        e = Ellipse(Point2(0, 0), 5.0, 1.0, 0.0)
        for p in [Point2(3.0, 0.05), Point2(4.0, 0.01), Point2(4.79, 0.0),
                  Point2(2.0, 0.3), Point2(0.0, 0.5)]:
            got = abs(distance_to_ellipse(p, e))
            want = oracle_distance(p, e, n=40_000)
            assert got == pytest.approx(want, abs=1e-6)

    @given(st.floats(-6, 6), st.floats(-6, 6))
    @settings(max_examples=200, deadline=None)
    def test_sign_agrees_with_containment(self, px, py):
        e = Ellipse(Point2(0.3, -0.6), 2.5, 0.8, 0.4)
        p = Point2(px, py)
        d = distance_to_ellipse(p, e)
        if abs(d) > 1e-6:
            assert point_in_ellipse(p, e) == (d < 0)

    def test_nearest_point_is_on_boundary(self):
        rng = np.random.default_rng(5)
        e = Ellipse(Point2(1, 2), 3.0, 1.5, 0.8)
        for _ in range(100):
            p = Point2(*rng.uniform(-6, 8, 2))
            q = nearest_boundary_point(p, e)
            assert abs(distance_to_ellipse(q, e)) < 1e-9

    def test_outward_normal(self):
        e = Ellipse(Point2(0, 0), 2, 1, 0)
        n = ellipse_outward_normal(e, Point2(2, 0))
        assert n == pytest.approx((1.0, 0.0), abs=1e-12)
        n = ellipse_outward_normal(e, Point2(0, 1))
        assert n == pytest.approx((0.0, 1.0), abs=1e-12)
