"""Mission plan expansion, route progress, collision observation and
rendezvous goal-point generation.

A mission arrives as complex maneuvers (Track, Meander) and is expanded
into chained straight basis legs. Progress along the expanded route is
tracked as a monotone arc length; detected objects are checked against the
upcoming route window and, when they obstruct it, a rendezvous point past
the obstruction is generated for the avoidance system to steer at.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Union

from .geometry import (
    Obstacle,
    Point2,
    dist,
    inflate,
    point_in_ellipse,
    segment_ellipse_span,
)


class MissionValidationError(Exception):
    """Invalid maneuver parameters; names the offending field."""

    def __init__(self, field_name: str, reason: str):
        super().__init__(f"{field_name}: {reason}")
        self.field_name = field_name


class RouteBlockedError(Exception):
    """No clear rendezvous point exists on the remaining route."""


@dataclass(frozen=True)
class Track:
    """Straight transit from one point to another at a set speed."""

    start: Point2
    end: Point2
    speed: float


@dataclass(frozen=True)
class Meander:
    """Lawnmower survey: parallel lanes along `heading`, stacked to its left.

    length is the lane length, width the across-lane extent covered with
    lanes every lane_spacing meters.
    """

    origin: Point2
    heading: float
    length: float
    width: float
    lane_spacing: float
    speed: float


ComplexManeuver = Union[Track, Meander]


@dataclass(frozen=True)
class BasisManeuver:
    """One straight route leg."""

    start: Point2
    end: Point2
    speed: float

    @property
    def length(self) -> float:
        return dist(self.start, self.end)


@dataclass
class MissionPlan:
    """Expanded route: chained legs plus the objects flagged for identification."""

    legs: list[BasisManeuver]
    identify_targets: frozenset[str] = field(default_factory=frozenset)

    @cached_property
    def cum_lengths(self) -> list[float]:
        """Arc length at the start of each leg, plus the total at the end."""
        out = [0.0]
        for leg in self.legs:
            out.append(out[-1] + leg.length)
        return out

    @property
    def total_length(self) -> float:
        return self.cum_lengths[-1]

    def point_at(self, arc: float) -> Point2:
        """Route point at the given arc length (clamped to the route)."""
        arc = min(max(arc, 0.0), self.total_length)
        k = self.leg_index_at(arc)
        leg = self.legs[k]
        t = (arc - self.cum_lengths[k]) / leg.length
        return Point2(leg.start.x + t * (leg.end.x - leg.start.x),
                      leg.start.y + t * (leg.end.y - leg.start.y))

    def leg_index_at(self, arc: float) -> int:
        cum = self.cum_lengths
        for k in range(len(self.legs)):
            if arc <= cum[k + 1] or k == len(self.legs) - 1:
                return k
        return len(self.legs) - 1


@dataclass(frozen=True)
class RouteProgress:
    """Monotone position along the route."""

    leg_index: int = 0
    arc_length: float = 0.0


@dataclass(frozen=True)
class Conflict:
    """Interval of the route blocked by one inflated object."""

    leg_index: int
    obstacle_id: str
    entry_arc_length: float
    exit_arc_length: float


def _validate_positive(value: float, name: str) -> None:
    if not value > 0.0:
        raise MissionValidationError(name, f"must be > 0, got {value}")


def expand_mission(maneuvers: Sequence[ComplexManeuver],
                   identify_targets: Sequence[str] = ()) -> MissionPlan:
    """Expand complex maneuvers into chained basis legs.

    Tracks map to a single leg; meanders to floor(width / lane_spacing) + 1
    alternating lanes joined by cross legs. Disjoint consecutive maneuvers
    get a connector leg at the following maneuver's speed.
    """
    if not maneuvers:
        raise MissionValidationError("maneuvers", "mission must contain at least one maneuver")
    legs: list[BasisManeuver] = []

    def push(start: Point2, end: Point2, speed: float, name: str) -> None:
        if start == end:
            raise MissionValidationError(name, "zero-length leg")
        if legs and legs[-1].end != start:
            legs.append(BasisManeuver(legs[-1].end, start, speed))
        legs.append(BasisManeuver(start, end, speed))

    for idx, m in enumerate(maneuvers):
        where = f"maneuvers[{idx}]"
        if isinstance(m, Track):
            _validate_positive(m.speed, f"{where}.speed")
            push(m.start, m.end, m.speed, where)
        elif isinstance(m, Meander):
            _validate_positive(m.speed, f"{where}.speed")
            _validate_positive(m.length, f"{where}.length")
            _validate_positive(m.width, f"{where}.width")
            _validate_positive(m.lane_spacing, f"{where}.lane_spacing")
            n_lanes = int(math.floor(m.width / m.lane_spacing)) + 1
            hx, hy = math.cos(m.heading), math.sin(m.heading)
            px, py = -hy, hx  # lane-stacking direction, left of heading
            prev_end: Optional[Point2] = None
            for lane in range(n_lanes):
                ox = m.origin.x + lane * m.lane_spacing * px
                oy = m.origin.y + lane * m.lane_spacing * py
                a = Point2(ox, oy)
                b = Point2(ox + m.length * hx, oy + m.length * hy)
                if lane % 2 == 1:
                    a, b = b, a
                if prev_end is not None:
                    push(prev_end, a, m.speed, f"{where}.lane[{lane}]")
                push(a, b, m.speed, f"{where}.lane[{lane}]")
                prev_end = b
        else:
            raise MissionValidationError(where, f"unsupported maneuver {type(m).__name__}")

    return MissionPlan(legs, frozenset(identify_targets))


def project_onto_route(p: Point2, plan: MissionPlan,
                       prev: RouteProgress) -> RouteProgress:
    """Nearest route point at arc length >= prev.arc_length.

    Only the current and subsequent legs are searched, so progress never
    moves backward even when the vehicle strays toward an earlier leg.
    """
    cum = plan.cum_lengths
    best_d2 = math.inf
    best = prev
    for k in range(prev.leg_index, len(plan.legs)):
        leg = plan.legs[k]
        vx = leg.end.x - leg.start.x
        vy = leg.end.y - leg.start.y
        L2 = vx * vx + vy * vy
        t = ((p.x - leg.start.x) * vx + (p.y - leg.start.y) * vy) / L2
        t = min(1.0, max(0.0, t))
        arc = cum[k] + t * leg.length
        if arc < prev.arc_length:
            if cum[k + 1] <= prev.arc_length:
                continue
            arc = prev.arc_length
            t = (arc - cum[k]) / leg.length
        qx = leg.start.x + t * vx
        qy = leg.start.y + t * vy
        d2 = (p.x - qx) ** 2 + (p.y - qy) ** 2
        if d2 < best_d2 - 1e-12:
            best_d2 = d2
            best = RouteProgress(k, arc)
    return best


def _blocked_intervals(plan: MissionPlan, objects: Sequence[Obstacle],
                       margin: float, lo: float, hi: float,
                       ) -> list[tuple[float, float, int, str]]:
    """Route-arc intervals inside inflated objects, clipped to [lo, hi]."""
    cum = plan.cum_lengths
    out = []
    for k, leg in enumerate(plan.legs):
        leg_lo = cum[k]
        leg_hi = cum[k + 1]
        if leg_hi < lo or leg_lo > hi:
            continue
        for o in objects:
            span = segment_ellipse_span(leg.start, leg.end, inflate(o.ellipse, margin))
            if span is None:
                continue
            entry = max(leg_lo + span[0] * leg.length, lo)
            exit_ = min(leg_lo + span[1] * leg.length, hi)
            if entry <= exit_:
                out.append((entry, exit_, k, o.id))
    out.sort(key=lambda c: (c[0], c[2], c[3]))
    return out


def collision_observation(plan: MissionPlan, progress: RouteProgress,
                          objects: Sequence[Obstacle], margin: float,
                          lookahead: float) -> list[Conflict]:
    """Conflicts between inflated objects and the route window ahead.

    The window spans [progress, progress + lookahead] of arc length;
    conflicts are clipped to it and sorted by entry arc length.
    """
    lo = progress.arc_length
    hi = min(progress.arc_length + lookahead, plan.total_length)
    return [Conflict(k, oid, entry, exit_)
            for entry, exit_, k, oid in _blocked_intervals(plan, objects, margin, lo, hi)]


def goal_point_generation(plan: MissionPlan, progress: RouteProgress,
                          objects: Sequence[Obstacle], margin: float,
                          clear_run: float, step: float) -> Point2:
    """Rendezvous point on the remaining route, past the detected objects.

    Scans arc lengths from the current progress in `step` increments and
    returns the first route point that is outside every inflated object and
    whose following clear_run meters of route stay outside. Raises
    RouteBlockedError when the remaining route offers no such point.
    """
    total = plan.total_length
    s0 = progress.arc_length
    intervals = _blocked_intervals(plan, objects, margin, s0, total)
    inflated = [inflate(o.ellipse, margin) for o in objects]

    arc = s0
    while arc <= total + 1e-9:
        lam = min(arc, total)
        run_end = min(lam + clear_run, total)
        blocked = any(entry <= run_end and exit_ >= lam
                      for entry, exit_, _, _ in intervals)
        if not blocked:
            point = plan.point_at(lam)
            if not any(point_in_ellipse(point, e) for e in inflated):
                return point
        if lam >= total:
            break
        arc += step
    raise RouteBlockedError(
        f"no clear rendezvous on the remaining {total - s0:.1f} m of route")
