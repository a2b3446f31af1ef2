"""Autopilot, kinematics, sonar and the supervisor state machine."""

import math
from pathlib import Path

import numpy as np
import pytest

from deepc_guidance.geometry import Ellipse, Obstacle, Point2
from deepc_guidance.scenario import load_scenario, scenario_from_dict
from deepc_guidance.simulator import (
    VcsMode,
    run_reactive_transit,
    run_scenario,
)
from deepc_guidance.sonar import SonarConfig, SonarNoise, sonar_scan
from deepc_guidance.vehicle import (
    GuidanceCommand,
    SeaCurrent,
    VehicleParams,
    VehicleState,
    autopilot_step,
    vehicle_step,
)

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"

ALLOWED_TRANSITIONS = {
    ("Automatic", "AvoidPlanned"), ("Automatic", "AvoidReactive"),
    ("Automatic", "IdentifyAlign"), ("Automatic", "IdentifyOrbit"),
    ("Automatic", "MissionComplete"), ("Automatic", "Aborted"),
    ("AvoidPlanned", "AvoidReactive"), ("AvoidPlanned", "Automatic"),
    ("AvoidPlanned", "Aborted"),
    ("AvoidReactive", "AvoidPlanned"), ("AvoidReactive", "Automatic"),
    ("AvoidReactive", "Aborted"),
    ("IdentifyAlign", "SeekRendezvous"), ("IdentifyAlign", "Aborted"),
    ("IdentifyOrbit", "SeekRendezvous"), ("IdentifyOrbit", "Aborted"),
    ("SeekRendezvous", "Automatic"), ("SeekRendezvous", "AvoidReactive"),
    ("SeekRendezvous", "Aborted"),
}


def scenario(name):
    return load_scenario(SCENARIOS / f"{name}.json")


def minimal_scenario(**overrides):
    doc = {
        "mission": {"maneuvers": [
            {"type": "track", "from": [0.0, 0.0], "to": [260.0, 0.0], "speed": 2.06}]},
        "max_time": 600.0,
    }
    doc.update(overrides)
    return scenario_from_dict(doc)


class TestAutopilot:
    def test_equilibrium(self):
        p = VehicleParams()
        s = VehicleState(Point2(0, 0), 1.0, 2.0)
        r, a = autopilot_step(s, GuidanceCommand(1.0, 2.0), p)
        assert r == 0.0
        assert a == 0.0

    def test_error_wraps_across_pi(self):
        p = VehicleParams()
        s = VehicleState(Point2(0, 0), 3.0, 2.0)
        r, _ = autopilot_step(s, GuidanceCommand(-3.0, 2.0), p)
        # wrapped error is +0.283, not -6.0
        assert r == pytest.approx(p.k_course * (2 * math.pi - 6.0), abs=1e-12)
        assert 0.0 < r < p.r_max

    def test_saturation_at_r_max(self):
        p = VehicleParams()
        s = VehicleState(Point2(0, 0), 0.0, 2.0)
        r, _ = autopilot_step(s, GuidanceCommand(math.pi, 2.0), p)
        assert abs(r) == p.r_max

    def test_acceleration_clamped(self):
        p = VehicleParams()
        s = VehicleState(Point2(0, 0), 0.0, 0.0)
        _, a = autopilot_step(s, GuidanceCommand(0.0, 3.0), p)
        assert a == p.a_max


class TestVehicleStep:
    def test_straight_advance(self):
        p = VehicleParams(dt=0.5)
        s = VehicleState(Point2(0, 0), 0.0, 2.0)
        nxt = vehicle_step(s, 0.0, 0.0, SeaCurrent(), p)
        assert nxt.position == pytest.approx((1.0, 0.0))
        assert nxt.time == 0.5

    def test_pure_drift(self):
        p = VehicleParams(dt=0.5)
        s = VehicleState(Point2(0, 0), 0.0, 0.0)
        nxt = vehicle_step(s, 0.0, 0.0, SeaCurrent(0.5, 0.0), p)
        assert nxt.position == pytest.approx((0.25, 0.0))

    def test_turn_rate_bound(self):
        p = VehicleParams(dt=0.5)
        rng = np.random.default_rng(2)
        s = VehicleState(Point2(0, 0), 0.0, 2.0)
        for _ in range(200):
            cmd = GuidanceCommand(float(rng.uniform(-math.pi, math.pi)),
                                  float(rng.uniform(0, 3.0)))
            r, a = autopilot_step(s, cmd, p)
            nxt = vehicle_step(s, r, a, SeaCurrent(), p)
            dpsi = abs(math.remainder(nxt.course - s.course, 2 * math.pi))
            assert dpsi <= p.r_max * p.dt + 1e-12
            assert 0.0 <= nxt.speed <= p.u_max
            s = nxt


class TestSonar:
    WORLD = [  # one obstacle ahead, one behind
        Obstacle("front", Ellipse(Point2(50, 0), 5, 3, 0.2)),
        Obstacle("behind", Ellipse(Point2(-30, 0), 5, 5, 0.0)),
    ]

    def test_fov_excludes_behind(self):
        cfg = SonarConfig(range=100.0, fov_half_angle=math.pi / 3)
        state = VehicleState(Point2(0, 0), 0.0, 2.0)
        rng = np.random.default_rng(0)
        ids = [d.obstacle_id for d in sonar_scan(state, self.WORLD, cfg, rng)]
        assert ids == ["front"]

    def test_range_limit(self):
        cfg = SonarConfig(range=10.0, fov_half_angle=math.pi)
        state = VehicleState(Point2(0, 0), 0.0, 2.0)
        rng = np.random.default_rng(0)
        assert sonar_scan(state, self.WORLD, cfg, rng) == []

    def test_noiseless_scan_is_exact(self):
        cfg = SonarConfig(range=100.0, fov_half_angle=math.pi)
        state = VehicleState(Point2(0, 0), 0.0, 2.0)
        rng = np.random.default_rng(0)
        dets = sonar_scan(state, self.WORLD, cfg, rng)
        assert dets[0].perceived == self.WORLD[0].ellipse
        assert dets[1].perceived == self.WORLD[1].ellipse

    def test_seeded_noise_reproducible(self):
        cfg = SonarConfig(range=100.0, fov_half_angle=math.pi,
                          noise=SonarNoise(1.0, 0.5, 0.05))
        state = VehicleState(Point2(0, 0), 0.0, 2.0)
        a = sonar_scan(state, self.WORLD, cfg, np.random.default_rng(42))
        b = sonar_scan(state, self.WORLD, cfg, np.random.default_rng(42))
        assert a == b
        c = sonar_scan(state, self.WORLD, cfg, np.random.default_rng(43))
        assert c != a

    def test_noise_keeps_axes_valid(self):
        cfg = SonarConfig(range=100.0, fov_half_angle=math.pi,
                          noise=SonarNoise(0.0, 50.0, 0.0))
        state = VehicleState(Point2(0, 0), 0.0, 2.0)
        rng = np.random.default_rng(1)
        for _ in range(50):
            for d in sonar_scan(state, self.WORLD, cfg, rng):
                assert d.perceived.a >= d.perceived.b > 0.0


class TestSupervisor:
    def test_empty_world_automatic_to_complete(self):
        log, m = run_scenario(scenario("straight_track"))
        assert m.outcome == "completed"
        assert [x.value for x in log.mode_sequence()] == ["Automatic", "MissionComplete"]
        # documented free-run time: 100 m at 2.06 m/s less the capture radius
        assert m.completion_time == pytest.approx(48.5, abs=2.0)

    def test_single_obstacle_planned_avoidance(self):
        sc = minimal_scenario(world={"obstacles": [
            {"id": "rock", "center": [130.0, 0.0], "a": 8.0, "b": 8.0}]})
        log, m = run_scenario(sc)
        assert m.outcome == "completed"
        seq = [x.value for x in log.mode_sequence()]
        assert seq == ["Automatic", "AvoidPlanned", "Automatic", "MissionComplete"]
        assert m.min_clearance > 0.0

    def test_small_sonar_range_goes_reactive_first(self):
        log, m = run_scenario(scenario("sudden_obstacle"))
        assert m.outcome == "completed"
        seq = [x.value for x in log.mode_sequence()]
        joined = ",".join(seq)
        assert "AvoidReactive,AvoidPlanned,Automatic,MissionComplete" in joined
        assert seq[0] == "Automatic"

    def test_mode_transitions_all_legal(self):
        for name in ["sudden_obstacle", "reactive_gauntlet", "align_current",
                     "orbit_survey", "planner_comparison"]:
            log, _ = run_scenario(scenario(name))
            for _, text in log.events:
                if text.startswith("mode "):
                    arrow = text[len("mode "):].split(" (")[0]
                    frm, to = arrow.split(" -> ")
                    assert (frm, to) in ALLOWED_TRANSITIONS, (name, frm, to)

    def test_identify_size_rule_consistency(self):
        # every identify-tasked obstacle maps to exactly one mode
        align_log, _ = run_scenario(scenario("align_current"))
        orbit_log, _ = run_scenario(scenario("orbit_survey"))
        align_modes = {s.mode for s in align_log.samples}
        orbit_modes = {s.mode for s in orbit_log.samples}
        assert VcsMode.IDENTIFY_ALIGN in align_modes
        assert VcsMode.IDENTIFY_ORBIT not in align_modes
        assert VcsMode.IDENTIFY_ORBIT in orbit_modes
        assert VcsMode.IDENTIFY_ALIGN not in orbit_modes

    def test_determinism_same_seed(self):
        a_log, a_m = run_scenario(scenario("sudden_obstacle"))
        b_log, b_m = run_scenario(scenario("sudden_obstacle"))
        assert a_log.samples == b_log.samples
        assert a_log.events == b_log.events
        assert a_m == b_m

    def test_different_seed_differs_with_noise(self):
        sc1 = scenario("sudden_obstacle")
        sc2 = scenario("sudden_obstacle")
        sc2.seed = sc1.seed + 1
        a_log, _ = run_scenario(sc1)
        b_log, _ = run_scenario(sc2)
        assert a_log.samples != b_log.samples

    def test_kinematic_bounds_hold_on_logs(self):
        for name in ["reactive_gauntlet", "align_current"]:
            sc = scenario(name)
            log, _ = run_scenario(sc)
            p = sc.vehicle
            for a, b in zip(log.samples, log.samples[1:]):
                dpsi = abs(math.remainder(b.course - a.course, 2 * math.pi))
                assert dpsi <= p.r_max * p.dt + 1e-12
                assert 0.0 <= b.speed <= p.u_max

    def test_blocked_route_aborts(self):
        sc = minimal_scenario(
            mission={"maneuvers": [
                {"type": "track", "from": [0.0, 0.0], "to": [100.0, 0.0],
                 "speed": 2.06}]},
            world={"obstacles": [
                {"id": "wall", "center": [100.0, 0.0], "a": 20.0, "b": 20.0}]})
        log, m = run_scenario(sc)
        assert m.outcome == "aborted"
        assert any("route blocked" in text for _, text in log.events)

    def test_supervisor_reacts_only_to_detections(self):
        # the true obstacle sits on the route from t=0, but nothing happens
        # until the sonar first reports it
        log, m = run_scenario(scenario("sudden_obstacle"))
        first_seen = min(s.time for s in log.samples if s.active_ids)
        assert first_seen > 30.0  # short sonar range delays the detection
        for s in log.samples:
            if s.time < first_seen:
                assert s.mode is VcsMode.AUTOMATIC
                assert s.active_ids == ()
        assert all(t >= first_seen for t, _ in log.events)

    def test_mode_durations_sum_to_completion(self):
        sc = scenario("reactive_gauntlet")
        log, m = run_scenario(sc)
        assert sum(m.mode_durations.values()) == pytest.approx(
            m.completion_time, abs=sc.vehicle.dt)

    def test_reactive_transit_deterministic(self):
        sc = scenario("reactive_gauntlet")
        a_log, a_m = run_reactive_transit(sc, "dipole")
        b_log, b_m = run_reactive_transit(sc, "dipole")
        assert a_log.samples == b_log.samples
        assert a_m == b_m
