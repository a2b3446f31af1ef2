"""Kinematic vehicle model and course/speed autopilot.

The vehicle is a point with a course, a through-water speed and a bounded
turn rate; the sea current adds a ground-frame drift. Integration is fixed
step semi-implicit Euler, which keeps runs reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Point2, wrap_angle

KNOT = 0.514444  # m/s


@dataclass(frozen=True)
class VehicleState:
    """Pose and through-water speed at a simulation instant."""

    position: Point2
    course: float          # radians, (-pi, pi]
    speed: float           # m/s through water
    time: float = 0.0


@dataclass(frozen=True)
class GuidanceCommand:
    """Course / speed setpoints handed to the autopilot."""

    desired_course: float
    desired_speed: float


@dataclass(frozen=True)
class VehicleParams:
    """Vehicle limits and autopilot gains.

    Speed defaults are the 4 kt cruise / 6 kt maximum of the target vehicle;
    the turn-rate cap reflects its sluggish course response. a_max bounds
    the speed transient.
    """

    u_cruise: float = 4.0 * KNOT     # 2.058 m/s
    u_max: float = 6.0 * KNOT        # 3.087 m/s
    r_max: float = 0.15              # rad/s
    k_course: float = 0.5            # 1/s
    k_speed: float = 0.5             # 1/s
    a_max: float = 0.2               # m/s^2
    dt: float = 0.5                  # s

    def __post_init__(self) -> None:
        if not (0.0 < self.u_cruise <= self.u_max):
            raise ValueError("require 0 < u_cruise <= u_max")
        if self.r_max <= 0.0 or self.dt <= 0.0 or self.a_max <= 0.0:
            raise ValueError("r_max, a_max and dt must be > 0")


@dataclass(frozen=True)
class SeaCurrent:
    """Horizontal sea-current velocity in the ground frame, m/s."""

    vx: float = 0.0
    vy: float = 0.0

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)

    @property
    def direction(self) -> float:
        """Direction the current flows toward, radians CCW from east."""
        return math.atan2(self.vy, self.vx)


def clamp(value: float, lo: float, hi: float) -> float:
    return min(hi, max(lo, value))


def autopilot_step(state: VehicleState, cmd: GuidanceCommand,
                   params: VehicleParams) -> tuple[float, float]:
    """Turn rate and acceleration that steer the state toward the command.

    Proportional course control on the wrapped error, saturated at r_max;
    proportional speed control saturated at a_max.
    """
    err = wrap_angle(cmd.desired_course - state.course)
    r = clamp(params.k_course * err, -params.r_max, params.r_max)
    accel = clamp(params.k_speed * (cmd.desired_speed - state.speed),
                  -params.a_max, params.a_max)
    return r, accel


def vehicle_step(state: VehicleState, r: float, accel: float,
                 current: SeaCurrent, params: VehicleParams) -> VehicleState:
    """One semi-implicit Euler step of duration params.dt."""
    dt = params.dt
    course = wrap_angle(state.course + r * dt)
    speed = clamp(state.speed + accel * dt, 0.0, params.u_max)
    x = state.position.x + dt * (speed * math.cos(course) + current.vx)
    y = state.position.y + dt * (speed * math.sin(course) + current.vy)
    return VehicleState(Point2(x, y), course, speed, state.time + dt)
