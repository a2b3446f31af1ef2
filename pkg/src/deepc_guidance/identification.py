"""Guidance laws for identifying an object.

Two maneuvers, chosen by object size:

* Aligning: take station in the flow shade downstream of the object. From
  upstream (Evasive area) the vehicle rounds the object with the geometric
  reactive law toward the flow-shade goal; once across the borderline
  through the object center perpendicular to the current (Positioning
  area), it closes on the goal, rotates in place to face the current, then
  holds position with a speed law that cancels the drift.

* Going around: close on the constant-distance orbit (Steering), then
  follow it with tangent steering plus a proportional cross-track
  correction (Tracking) until a full revolution of bearing about the
  object center has been swept.

Phase state is owned by the caller and threaded through explicitly; the
command computations themselves are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .geometry import (
    Obstacle,
    Point2,
    dist,
    distance_to_ellipse,
    ellipse_outward_normal,
    inflate,
    nearest_boundary_point,
    ray_ellipse_intersection,
    security_circle,
    unit_towards,
    wrap_angle,
)
from .reactive_guidance import geometric_gradient, ReactiveConfig
from .vehicle import GuidanceCommand, SeaCurrent, clamp

__all__ = [
    "SeaCurrent", "AlignConfig", "OrbitConfig", "IdentPhase",
    "AlignState", "OrbitState", "flow_shade_goal", "alignment_mode",
    "align_command", "orbit_distance_error", "orbit_command",
]


class IdentPhase(Enum):
    EVASIVE = "Evasive"
    POSITIONING = "Positioning"
    STEERING = "Steering"
    TRACKING = "Tracking"
    DONE = "Done"


# legal transitions of the two phase machines
_LEGAL = {
    IdentPhase.EVASIVE: {IdentPhase.EVASIVE, IdentPhase.POSITIONING},
    IdentPhase.POSITIONING: {IdentPhase.POSITIONING, IdentPhase.DONE},
    IdentPhase.STEERING: {IdentPhase.STEERING, IdentPhase.TRACKING},
    IdentPhase.TRACKING: {IdentPhase.TRACKING, IdentPhase.STEERING, IdentPhase.DONE},
    IdentPhase.DONE: {IdentPhase.DONE},
}


def check_transition(old: IdentPhase, new: IdentPhase) -> IdentPhase:
    if new not in _LEGAL[old]:
        raise ValueError(f"illegal identification phase transition {old} -> {new}")
    return new


@dataclass(frozen=True)
class AlignConfig:
    """Parameters of the aligning maneuver."""

    standoff: float = 8.0            # defined distance to the object, m
    safety_margin: float = 3.0
    position_tolerance: float = 1.0
    course_tolerance: float = 0.1    # rad
    hold_time: float = 10.0          # s the tolerances must be sustained
    station_gain: float = 0.1       # 1/s, range error into speed

    def __post_init__(self) -> None:
        if self.standoff <= 0.0:
            raise ValueError("standoff must be > 0")
        if self.position_tolerance <= 0.0 or self.course_tolerance <= 0.0:
            raise ValueError("tolerances must be > 0")


@dataclass(frozen=True)
class OrbitConfig:
    """Parameters of the going-around maneuver."""

    target_distance: float = 30.0
    direction: str = "ccw"           # "ccw" | "cw"
    mode_switch_threshold: float = 1.4
    cross_track_gain: float = 0.3

    def __post_init__(self) -> None:
        if self.target_distance <= 0.0:
            raise ValueError("target_distance must be > 0")
        if self.mode_switch_threshold <= 0.0:
            raise ValueError("mode_switch_threshold must be > 0")
        if self.direction not in ("ccw", "cw"):
            raise ValueError(f"unknown orbit direction '{self.direction}'")


@dataclass(frozen=True)
class AlignState:
    """Aligning phase machine plus the station-keeping dwell clock."""

    phase: IdentPhase = IdentPhase.EVASIVE
    dwell: float = 0.0


@dataclass(frozen=True)
class OrbitState:
    """Orbit phase machine plus swept-angle bookkeeping."""

    phase: IdentPhase = IdentPhase.STEERING
    swept: float = 0.0
    prev_bearing: Optional[float] = None


def flow_shade_goal(o: Obstacle, current: SeaCurrent, cfg: AlignConfig) -> Point2:
    """Station point on the safety ellipse, downstream in the flow shade.

    The safety ellipse is the object inflated by standoff + safety_margin;
    the goal is where the ray from the object center along the current
    direction exits it.
    """
    if current.speed == 0.0:
        raise ValueError("flow shade undefined without current")
    safety = inflate(o.ellipse, cfg.standoff + cfg.safety_margin)
    direction = Point2(current.vx / current.speed, current.vy / current.speed)
    hit = ray_ellipse_intersection(safety.center, direction, safety)
    assert hit is not None  # ray from the center always exits
    return hit


def alignment_mode(p: Point2, o: Obstacle, current: SeaCurrent) -> IdentPhase:
    """Evasive upstream of the borderline, Positioning downstream.

    The borderline runs through the object center perpendicular to the
    current; points exactly on it count as Evasive (fail-safe). Zero
    current makes the whole plane Positioning.
    """
    if current.speed == 0.0:
        return IdentPhase.POSITIONING
    along = ((p.x - o.ellipse.center.x) * current.vx
             + (p.y - o.ellipse.center.y) * current.vy) / current.speed
    return IdentPhase.POSITIONING if along > 0.0 else IdentPhase.EVASIVE


def align_command(p: Point2, course: float, o: Obstacle, current: SeaCurrent,
                  cfg: AlignConfig, state: AlignState, dt: float,
                  cruise_speed: float = 2.06, max_speed: float = 3.09,
                  ) -> tuple[GuidanceCommand, AlignState]:
    """One aligning-control step; returns the command and the next state."""
    if state.phase not in (IdentPhase.EVASIVE, IdentPhase.POSITIONING):
        raise ValueError(f"align_command called in phase {state.phase}")

    if current.speed == 0.0:
        # degenerate: hold position facing the object center
        hold_course = wrap_angle(
            math.atan2(o.ellipse.center.y - p.y, o.ellipse.center.x - p.x))
        cmd = GuidanceCommand(hold_course, 0.0)
        aligned = abs(wrap_angle(course - hold_course)) < cfg.course_tolerance
        dwell = state.dwell + dt if aligned else 0.0
        phase = state.phase
        if phase is IdentPhase.EVASIVE:
            phase = check_transition(phase, IdentPhase.POSITIONING)
        if dwell >= cfg.hold_time:
            phase = check_transition(phase, IdentPhase.DONE)
        return cmd, AlignState(phase, dwell)

    goal = flow_shade_goal(o, current, cfg)
    into_current = wrap_angle(math.atan2(-current.vy, -current.vx))
    unit_cx = current.vx / current.speed
    unit_cy = current.vy / current.speed

    if state.phase is IdentPhase.EVASIVE:
        # round the object, enlarged to the full safety range, toward the goal
        circle = security_circle(o, cfg.standoff + cfg.safety_margin)
        sample = geometric_gradient(p, [circle], goal, ReactiveConfig())
        cmd = GuidanceCommand(
            wrap_angle(math.atan2(sample.direction.y, sample.direction.x)),
            cruise_speed)
        new_phase = state.phase
        if alignment_mode(p, o, current) is IdentPhase.POSITIONING:
            new_phase = check_transition(state.phase, IdentPhase.POSITIONING)
        return cmd, AlignState(new_phase, 0.0)

    # Positioning: approach the goal along the reactive path, rotate in
    # place, then hold station nose into the current
    range_to_goal = dist(p, goal)
    near = 0.75 * cfg.position_tolerance
    course_err = abs(wrap_angle(course - into_current))

    if range_to_goal > near:
        # still approaching: reactive path with the plain safety margin so
        # the goal itself lies outside the active security circle
        circle = security_circle(o, cfg.safety_margin)
        sample = geometric_gradient(p, [circle], goal, ReactiveConfig())
        speed = min(cruise_speed, current.speed + max(0.3, 0.2 * range_to_goal))
        cmd = GuidanceCommand(
            wrap_angle(math.atan2(sample.direction.y, sample.direction.x)), speed)
        return cmd, AlignState(IdentPhase.POSITIONING, 0.0)

    if course_err > cfg.course_tolerance * 3.0:
        # rotate in place; zero speed keeps the drift purely downstream
        cmd = GuidanceCommand(into_current, 0.0)
        return cmd, AlignState(IdentPhase.POSITIONING, 0.0)

    # hold: through-water speed = drift speed plus proportional range term,
    # positive when the vehicle must advance upstream
    e_along = (p.x - goal.x) * unit_cx + (p.y - goal.y) * unit_cy
    speed = clamp(current.speed + cfg.station_gain * e_along, 0.0, max_speed)
    cmd = GuidanceCommand(into_current, speed)
    on_station = (range_to_goal < cfg.position_tolerance
                  and abs(wrap_angle(course - into_current)) < cfg.course_tolerance)
    dwell = state.dwell + dt if on_station else 0.0
    phase = IdentPhase.POSITIONING
    if dwell >= cfg.hold_time:
        phase = check_transition(phase, IdentPhase.DONE)
    return cmd, AlignState(phase, dwell)


def orbit_distance_error(p: Point2, o: Obstacle, cfg: OrbitConfig) -> float:
    """Signed offset from the target orbit; positive when too far out."""
    return distance_to_ellipse(p, o.ellipse) - cfg.target_distance


def orbit_command(p: Point2, course: float, o: Obstacle, cfg: OrbitConfig,
                  state: OrbitState, cruise_speed: float = 2.06,
                  ) -> tuple[GuidanceCommand, OrbitState]:
    """One going-around step; returns the command and the next state.

    Steering drives straight at the nearest point of the target orbit and
    hands over to Tracking inside the switch threshold; Tracking follows
    the tangent with a cross-track correction and finishes after a full
    2*pi of bearing about the object center. Speed is shaped down while
    the heading is far off the tangent so the turn onto the orbit stays
    inside the distance band.
    """
    if state.phase not in (IdentPhase.STEERING, IdentPhase.TRACKING):
        raise ValueError(f"orbit_command called in phase {state.phase}")
    if p == o.ellipse.center:
        raise ValueError("orbit command undefined at the object center")

    e = orbit_distance_error(p, o, cfg)
    boundary = nearest_boundary_point(p, o.ellipse)
    normal = ellipse_outward_normal(o.ellipse, boundary)
    if cfg.direction == "ccw":
        tangent = Point2(-normal.y, normal.x)
    else:
        tangent = Point2(normal.y, -normal.x)

    phase = state.phase
    if phase is IdentPhase.STEERING and abs(e) <= cfg.mode_switch_threshold:
        phase = check_transition(phase, IdentPhase.TRACKING)
    elif phase is IdentPhase.TRACKING and abs(e) > 2.0 * cfg.mode_switch_threshold:
        phase = check_transition(phase, IdentPhase.STEERING)

    if phase is IdentPhase.STEERING:
        sign = 1.0 if e > 0.0 else -1.0
        desired = wrap_angle(math.atan2(-sign * normal.y, -sign * normal.x))
        speed = clamp(0.12 * abs(e) + 0.2, 0.25, cruise_speed)
        return GuidanceCommand(desired, speed), OrbitState(phase, state.swept, None)

    # Tracking
    dx = tangent.x - cfg.cross_track_gain * e * normal.x
    dy = tangent.y - cfg.cross_track_gain * e * normal.y
    desired = wrap_angle(math.atan2(dy, dx))
    course_err = abs(wrap_angle(course - math.atan2(tangent.y, tangent.x)))
    speed = 0.25 + (cruise_speed - 0.25) * clamp(1.0 - course_err / (math.pi / 3.0),
                                                 0.0, 1.0)

    bearing_now = math.atan2(p.y - o.ellipse.center.y, p.x - o.ellipse.center.x)
    swept = state.swept
    if state.prev_bearing is not None:
        step = wrap_angle(bearing_now - state.prev_bearing)
        if cfg.direction == "cw":
            step = -step
        swept += step
    if swept >= 2.0 * math.pi:
        phase = check_transition(phase, IdentPhase.DONE)
    return GuidanceCommand(desired, speed), OrbitState(phase, swept, bearing_now)
