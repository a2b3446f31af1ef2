"""Mission expansion, progress tracking and collision observation."""

import math

import numpy as np
import pytest

from deepc_guidance.geometry import Ellipse, Obstacle, Point2, dist, inflate
from deepc_guidance.mission import (
    BasisManeuver,
    Meander,
    MissionPlan,
    MissionValidationError,
    RouteBlockedError,
    RouteProgress,
    Track,
    collision_observation,
    expand_mission,
    goal_point_generation,
    project_onto_route,
)


def chained(plan: MissionPlan) -> bool:
    return all(a.end == b.start for a, b in zip(plan.legs, plan.legs[1:]))


class TestExpandMission:
    def test_single_track(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(100, 0), 2.06)])
        assert len(plan.legs) == 1
        assert plan.total_length == pytest.approx(100.0)

    def test_meander_lawnmower(self):
        plan = expand_mission([Meander(Point2(0, 0), 0.0, length=100, width=20,
                                       lane_spacing=10, speed=2.06)])
        # 3 lanes at y = 0, 10, 20 plus 2 cross legs, alternating direction
        assert len(plan.legs) == 5
        lanes = [plan.legs[0], plan.legs[2], plan.legs[4]]
        assert lanes[0].start == Point2(0, 0) and lanes[0].end == Point2(100, 0)
        assert lanes[1].start == Point2(100, 10) and lanes[1].end == Point2(0, 10)
        assert lanes[2].start == Point2(0, 20) and lanes[2].end == Point2(100, 20)
        assert chained(plan)

    def test_meander_leg_count_property(self):
        for width, spacing in [(20, 10), (50, 7), (9, 10), (30, 30)]:
            plan = expand_mission([Meander(Point2(0, 0), 0.4, 60, width, spacing, 2.0)])
            n = math.floor(width / spacing) + 1
            assert len(plan.legs) == 2 * n - 1
            lane_total = sum(leg.length for leg in plan.legs[::2])
            assert lane_total == pytest.approx(n * 60.0)

    def test_shared_endpoint_no_connector(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(50, 0), 2.0),
                               Track(Point2(50, 0), Point2(50, 50), 2.0)])
        assert len(plan.legs) == 2
        assert chained(plan)

    def test_disjoint_maneuvers_get_connector(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(50, 0), 2.0),
                               Track(Point2(60, 10), Point2(80, 10), 2.0)])
        assert len(plan.legs) == 3
        assert chained(plan)

    def test_invalid_parameters_name_field(self):
        with pytest.raises(MissionValidationError) as exc:
            expand_mission([Meander(Point2(0, 0), 0.0, 100, 20, -1.0, 2.0)])
        assert "lane_spacing" in str(exc.value)
        with pytest.raises(MissionValidationError):
            expand_mission([])
        with pytest.raises(MissionValidationError) as exc:
            expand_mission([Track(Point2(0, 0), Point2(10, 0), 0.0)])
        assert "speed" in str(exc.value)


class TestProjectOntoRoute:
    def plan(self):
        return expand_mission([Track(Point2(0, 0), Point2(100, 0), 2.0),
                               Track(Point2(100, 0), Point2(100, 100), 2.0),
                               Track(Point2(100, 100), Point2(0, 100), 2.0)])

    def test_leg_midpoint(self):
        plan = self.plan()
        prog = project_onto_route(Point2(50, 3), plan, RouteProgress())
        assert prog.leg_index == 0
        assert prog.arc_length == pytest.approx(50.0)

    def test_monotone_under_ambiguity(self):
        # equidistant from legs 0 and 2; previous progress on leg 2 wins
        plan = self.plan()
        prev = RouteProgress(2, 220.0)
        prog = project_onto_route(Point2(50, 50), plan, prev)
        assert prog.leg_index == 2
        assert prog.arc_length >= prev.arc_length

    def test_far_point_matches_sampling_oracle(self):
        plan = self.plan()
        rng = np.random.default_rng(11)
        for _ in range(50):
            p = Point2(*rng.uniform(-50, 150, 2))
            prev_arc = float(rng.uniform(0, plan.total_length * 0.8))
            prev = RouteProgress(plan.leg_index_at(prev_arc), prev_arc)
            prog = project_onto_route(p, plan, prev)
            # oracle: scan the remaining route at 0.1 m
            arcs = np.arange(prev_arc, plan.total_length, 0.1)
            pts = [plan.point_at(a) for a in arcs]
            d = [dist(p, q) for q in pts]
            best = arcs[int(np.argmin(d))]
            assert dist(p, plan.point_at(prog.arc_length)) <= min(d) + 1e-6 + 0.1
            assert abs(prog.arc_length - best) < 0.2 or dist(
                p, plan.point_at(prog.arc_length)) <= min(d) + 0.01

    def test_repeated_projection_never_decreases(self):
        plan = self.plan()
        prog = RouteProgress()
        rng = np.random.default_rng(3)
        arc_values = []
        p = Point2(0, 0)
        for step in range(60):
            p = Point2(p.x + float(rng.uniform(0, 5)), float(rng.uniform(-5, 5)))
            prog = project_onto_route(p, plan, prog)
            arc_values.append(prog.arc_length)
        assert all(b >= a for a, b in zip(arc_values, arc_values[1:]))


class TestCollisionObservation:
    def test_no_objects(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(100, 0), 2.0)])
        assert collision_observation(plan, RouteProgress(), [], 2.0, 200.0) == []

    def test_closed_form_circle(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(100, 0), 2.0)])
        obs = [Obstacle("c", Ellipse(Point2(50, 0), 5, 5, 0.0))]
        conflicts = collision_observation(plan, RouteProgress(), obs, 0.0, 200.0)
        assert len(conflicts) == 1
        c = conflicts[0]
        assert c.obstacle_id == "c"
        assert c.entry_arc_length == pytest.approx(45.0, abs=1e-6)
        assert c.exit_arc_length == pytest.approx(55.0, abs=1e-6)

    def test_beyond_lookahead_is_empty(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(100, 0), 2.0)])
        obs = [Obstacle("c", Ellipse(Point2(50, 0), 5, 5, 0.0))]
        assert collision_observation(plan, RouteProgress(), obs, 0.0, 40.0) == []

    def test_sorted_by_entry(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(200, 0), 2.0)])
        obs = [Obstacle("far", Ellipse(Point2(150, 0), 5, 5, 0.0)),
               Obstacle("near", Ellipse(Point2(50, 0), 5, 5, 0.0))]
        conflicts = collision_observation(plan, RouteProgress(), obs, 0.0, 500.0)
        assert [c.obstacle_id for c in conflicts] == ["near", "far"]

    def test_against_dense_sampling_oracle(self):
        rng = np.random.default_rng(500)
        margin = 1.0
        step = 0.05
        for _ in range(500):
            a = Point2(*rng.uniform(-40, 40, 2))
            b = Point2(*rng.uniform(-40, 40, 2))
            if dist(a, b) < 1.0:
                continue
            plan = expand_mission([Track(a, b, 2.0)])
            e = Ellipse(Point2(*rng.uniform(-40, 40, 2)),
                        a=float(rng.uniform(2, 8)), b=float(rng.uniform(1, 2)),
                        theta=float(rng.uniform(0, math.pi)))
            obs = [Obstacle("x", e)]
            conflicts = collision_observation(plan, RouteProgress(), obs, margin,
                                              plan.total_length)
            infl = inflate(e, margin)
            arcs = np.arange(0.0, plan.total_length, step)
            hits = [s for s in arcs if _inside(plan.point_at(s), infl)]
            if conflicts:
                assert hits or conflicts[0].exit_arc_length - conflicts[0].entry_arc_length < step
                if hits:
                    assert abs(conflicts[0].entry_arc_length - hits[0]) <= step
                    assert abs(conflicts[-1].exit_arc_length - hits[-1]) <= step
            else:
                assert not hits


def _inside(p, e):
    from deepc_guidance.geometry import point_in_ellipse
    return point_in_ellipse(p, e)


class TestGoalPointGeneration:
    def test_no_objects_returns_current_point(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(100, 0), 2.0)])
        prog = RouteProgress(0, 30.0)
        assert goal_point_generation(plan, prog, [], 0.0, 20.0, 1.0) == \
            pytest.approx((30.0, 0.0))

    def test_first_sample_past_conflict(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(100, 0), 2.0)])
        obs = [Obstacle("c", Ellipse(Point2(50, 0), 5, 5, 0.0))]
        prog = RouteProgress(0, 30.0)
        goal = goal_point_generation(plan, prog, obs, 0.0, clear_run=20.0, step=1.0)
        assert goal == pytest.approx((86.0, 0.0), abs=1e-9) or goal.x >= 56.0
        # with the window covering the conflict, the first admissible sample
        # is the first integer arc past the exit at 55
        assert goal.x == pytest.approx(56.0, abs=1e-9)

    def test_route_end_blocked(self):
        plan = expand_mission([Track(Point2(0, 0), Point2(100, 0), 2.0)])
        obs = [Obstacle("end", Ellipse(Point2(95, 0), 10, 10, 0.0))]
        with pytest.raises(RouteBlockedError):
            goal_point_generation(plan, RouteProgress(0, 80.0), obs, 0.0, 20.0, 1.0)

    def test_result_clear_and_run_clear(self):
        rng = np.random.default_rng(77)
        plan = expand_mission([Track(Point2(0, 0), Point2(300, 0), 2.0)])
        for _ in range(30):
            cx = float(rng.uniform(40, 200))
            obs = [Obstacle("o", Ellipse(Point2(cx, float(rng.uniform(-3, 3))),
                                         float(rng.uniform(4, 12)),
                                         float(rng.uniform(2, 4)),
                                         float(rng.uniform(0, math.pi))))]
            margin = 2.0
            prog = RouteProgress(0, 10.0)
            goal = goal_point_generation(plan, prog, obs, margin, 30.0, 2.0)
            infl = inflate(obs[0].ellipse, margin)
            assert not _inside(goal, infl)
            arc = project_onto_route(goal, plan, prog).arc_length
            check = collision_observation(plan, RouteProgress(0, arc), obs, margin, 30.0)
            assert check == []
