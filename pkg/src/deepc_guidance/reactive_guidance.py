"""Reactive course generation from gradient lines of a synthetic guiding field.

Two interchangeable methods produce an instantaneous nominal course from the
vehicle position, the goal, and the security circles of nearby objects:

``dipole``
    Potential-flow superposition of a unit sink at the goal and one doublet
    per obstacle. For obstacle i with center c and radius R in a locally
    uniform ambient flow U (taken as the sink velocity at c), the doublet

        v_d(p) = (R^2 / rho^2) * (U - 2 (U . r_hat) r_hat),   r = p - c

    makes the circle an exact streamline of U + v_d, so field lines sweep
    around each security circle and terminate in the sink. Multiple
    obstacles superpose without mutual image corrections, a first-order
    approximation that degrades gracefully when circles are well separated.

``geometric``
    Sector construction. The operating area around the active circle splits
    into three sectors: inside the circle (radial escape), line of sight to
    the goal blocked by the circle (steer at the tangent point on the
    vehicle's side of the center-to-goal axis), and free line of sight
    (steer straight at the goal). The resulting field lines are straight
    tangent lines, which keeps commanded-course rates low.

Both methods are pure functions; the only state is the sector-3 escape
hysteresis, which the caller owns and passes in explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .geometry import (
    Obstacle,
    Point2,
    SecurityCircle,
    cross,
    dist,
    security_circle,
    tangent_points,
    unit_towards,
    wrap_angle,
)


class SectorClass(Enum):
    """Region of the geometric construction active at the vehicle position."""

    SECTOR_1 = 1   # view of the goal blocked, tangent steering
    SECTOR_2 = 2   # direct line of sight
    SECTOR_3 = 3   # inside the security circle, radial escape


@dataclass
class ReactiveConfig:
    """Tuning for the reactive methods.

    margin grows each obstacle's circumscribed circle into its security
    circle; hysteresis scales the sector-3 exit radius so escape does not
    chatter at the boundary; epsilon_singularity clamps the dipole field
    near circle centers.
    """

    method: str = "geometric"            # "geometric" | "dipole"
    margin: float = 3.0
    capture_radius: float = 3.0
    hysteresis: float = 1.05
    epsilon_singularity: float = 0.5

    def __post_init__(self) -> None:
        if self.method not in ("geometric", "dipole"):
            raise ValueError(f"unknown reactive method '{self.method}'")
        if self.margin < 0.0:
            raise ValueError("margin must be >= 0")
        if self.capture_radius <= 0.0:
            raise ValueError("capture_radius must be > 0")
        if self.hysteresis < 1.0:
            raise ValueError("hysteresis must be >= 1")
        if self.epsilon_singularity <= 0.0:
            raise ValueError("epsilon_singularity must be > 0")


@dataclass(frozen=True)
class GradientSample:
    """Unit guiding-field direction plus the sector that produced it.

    The dipole method reports active_sector None: its field has no sector
    structure.
    """

    direction: Point2
    active_sector: Optional[SectorClass] = None


@dataclass
class SectorMemory:
    """Caller-owned escape hysteresis for the geometric method.

    While escaping a circle the vehicle stays in radial-escape mode until it
    clears hysteresis * radius, preventing mode chatter on the boundary.
    """

    escape: Optional[tuple[float, float, float]] = None  # (cx, cy, radius)


def classify_sector(p: Point2, circle: SecurityCircle, g: Point2) -> SectorClass:
    """Sector of p relative to one security circle and the goal g.

    Sector 3 when strictly inside the circle; sector 1 when the segment p-g
    crosses the open disk; sector 2 otherwise. Hysteresis, if any, is the
    caller's concern.
    """
    if p == g:
        raise ValueError("sector undefined for p == g")
    if dist(p, circle.center) < circle.radius:
        return SectorClass.SECTOR_3
    if _segment_enters_open_disk(p, g, circle):
        return SectorClass.SECTOR_1
    return SectorClass.SECTOR_2


def _segment_enters_open_disk(p: Point2, g: Point2, c: SecurityCircle) -> bool:
    vx = g[0] - p[0]
    vy = g[1] - p[1]
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return dist(p, c.center) < c.radius
    t = ((c.center[0] - p[0]) * vx + (c.center[1] - p[1]) * vy) / vv
    t = min(1.0, max(0.0, t))
    nx = p[0] + t * vx - c.center[0]
    ny = p[1] + t * vy - c.center[1]
    return math.hypot(nx, ny) < c.radius


def _rot90_left(v: Point2) -> Point2:
    return Point2(-v[1], v[0])


def geometric_gradient(p: Point2, obstacles: Sequence[SecurityCircle], g: Point2,
                       cfg: ReactiveConfig,
                       memory: Optional[SectorMemory] = None) -> GradientSample:
    """Guiding direction from the geometric sector construction.

    The active circle is the blocking or containing circle whose center is
    nearest to p; with none active the direction is straight at the goal.
    Sector 1 steers at the tangent point on the same side of the
    center-to-goal axis as the vehicle (ties pick the left tangent);
    sector 3 escapes radially outward.
    """
    if p == g:
        raise ValueError("gradient undefined for p == g")

    # escape hysteresis: stick with the remembered circle until well clear
    if memory is not None and memory.escape is not None:
        cx, cy, radius = memory.escape
        if dist(p, Point2(cx, cy)) < cfg.hysteresis * radius:
            return _escape_sample(p, Point2(cx, cy), g)
        memory.escape = None

    active: Optional[SecurityCircle] = None
    best = math.inf
    for c in obstacles:
        d = dist(p, c.center)
        if d < c.radius or _segment_enters_open_disk(p, g, c):
            if d < best:
                best = d
                active = c

    if active is None:
        return GradientSample(unit_towards(p, g), SectorClass.SECTOR_2)

    if dist(p, active.center) < active.radius:
        if memory is not None:
            memory.escape = (active.center[0], active.center[1], active.radius)
        return _escape_sample(p, active.center, g)

    left, right = tangent_points(p, active)
    axis = Point2(g[0] - active.center[0], g[1] - active.center[1])
    side_p = cross(axis, Point2(p[0] - active.center[0], p[1] - active.center[1]))
    if side_p == 0.0:
        t = left
    else:
        side_left = cross(axis, Point2(left[0] - active.center[0],
                                       left[1] - active.center[1]))
        t = left if side_left * side_p > 0.0 else right
    if t == p:
        # numerically on the circle: steer along the local tangent
        radial = unit_towards(active.center, p)
        tangent = _rot90_left(radial)
        if cross(axis, Point2(p[0] - active.center[0], p[1] - active.center[1])) < 0:
            tangent = Point2(-tangent[0], -tangent[1])
        return GradientSample(tangent, SectorClass.SECTOR_1)
    return GradientSample(unit_towards(p, t), SectorClass.SECTOR_1)


def _escape_sample(p: Point2, center: Point2, g: Point2) -> GradientSample:
    if p == center:
        # degenerate radial: arbitrary but documented escape, 90 deg left of
        # the goal direction
        d = unit_towards(p, g)
        return GradientSample(_rot90_left(d), SectorClass.SECTOR_3)
    return GradientSample(unit_towards(center, p), SectorClass.SECTOR_3)


def dipole_field(p: Point2, obstacles: Sequence[SecurityCircle], g: Point2,
                 cfg: ReactiveConfig) -> GradientSample:
    """Guiding direction from the sink-plus-doublets potential flow."""
    if p == g:
        raise ValueError("field undefined for p == g")
    vx, vy = _sink(p, g)
    for c in obstacles:
        ux, uy = _sink(c.center, g)
        rx = p[0] - c.center[0]
        ry = p[1] - c.center[1]
        true_rho = math.hypot(rx, ry)
        rho = max(true_rho, cfg.epsilon_singularity)
        if true_rho == 0.0:
            rhx, rhy = 1.0, 0.0
        else:
            rhx, rhy = rx / true_rho, ry / true_rho
        u_dot_r = ux * rhx + uy * rhy
        k = (c.radius * c.radius) / (rho * rho)
        vx += k * (ux - 2.0 * u_dot_r * rhx)
        vy += k * (uy - 2.0 * u_dot_r * rhy)
    mag = math.hypot(vx, vy)
    if mag == 0.0:
        # stagnation point: fall back to pure goal attraction
        return GradientSample(unit_towards(p, g), None)
    return GradientSample(Point2(vx / mag, vy / mag), None)


def _sink(p: Point2, g: Point2) -> tuple[float, float]:
    dx = g[0] - p[0]
    dy = g[1] - p[1]
    d2 = dx * dx + dy * dy
    if d2 == 0.0:
        return 0.0, 0.0
    return dx / d2, dy / d2


def reactive_course(p: Point2, course: float, obstacles: Sequence[Obstacle],
                    g: Point2, cfg: ReactiveConfig,
                    memory: Optional[SectorMemory] = None) -> float:
    """Nominal course (radians) from the configured reactive method.

    Obstacles are abstracted to their security circles with cfg.margin. The
    current course is accepted for interface symmetry with the supervisor
    but does not influence the field direction.
    """
    circles = [security_circle(o, cfg.margin) for o in obstacles]
    if cfg.method == "dipole":
        sample = dipole_field(p, circles, g, cfg)
    else:
        sample = geometric_gradient(p, circles, g, cfg, memory)
    return wrap_angle(math.atan2(sample.direction[1], sample.direction[0]))


def nominal_speed(distance_to_goal: float, cruise_speed: float,
                  capture_radius: float) -> float:
    """Cruise speed, ramping linearly down to 0.5 m/s inside 3x capture radius."""
    ramp = 3.0 * capture_radius
    if distance_to_goal >= ramp:
        return cruise_speed
    floor = min(0.5, cruise_speed)
    return floor + (cruise_speed - floor) * max(distance_to_goal, 0.0) / ramp


def sample_direction_grid(method: str, obstacles: Sequence[Obstacle], g: Point2,
                          cfg: ReactiveConfig, x0: float, y0: float,
                          width: float, height: float,
                          nx: int, ny: int) -> list[tuple[float, float, float]]:
    """Direction field sampled on a regular grid, as (x, y, angle) triples.

    Feeds the SVG renderer's glyph grid. Samples coincident with the goal
    are skipped.
    """
    circles = [security_circle(o, cfg.margin) for o in obstacles]
    out = []
    for iy in range(ny):
        for ix in range(nx):
            x = x0 + (ix + 0.5) * width / nx
            y = y0 + (iy + 0.5) * height / ny
            p = Point2(x, y)
            if p == g:
                continue
            if method == "dipole":
                sample = dipole_field(p, circles, g, cfg)
            else:
                sample = geometric_gradient(p, circles, g, cfg)
            out.append((x, y, math.atan2(sample.direction[1], sample.direction[0])))
    return out
