"""Simulated limited-range forward sensor producing noisy ellipse detections.

Detection quality degrades with distance: every perturbation scales with
d / range. The generator is owned by the run and consumed in a fixed call
order, so scans are reproducible bit for bit for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import Ellipse, Obstacle, Point2, bearing, dist, nearest_boundary_point, wrap_angle
from .vehicle import VehicleState


@dataclass(frozen=True)
class SonarNoise:
    sigma_pos: float = 0.0    # m, per axis on the perceived center
    sigma_axes: float = 0.0   # m, on each semi-axis
    sigma_theta: float = 0.0  # rad, on the rotation


@dataclass(frozen=True)
class SonarConfig:
    range: float = 100.0
    fov_half_angle: float = np.pi / 2
    noise: SonarNoise = field(default_factory=SonarNoise)

    def __post_init__(self) -> None:
        if self.range <= 0.0:
            raise ValueError("sonar range must be > 0")
        if not (0.0 < self.fov_half_angle <= np.pi):
            raise ValueError("fov_half_angle must lie in (0, pi]")


@dataclass(frozen=True)
class Detection:
    """One perceived object. Axes are clamped so a >= b > 0.1 survives noise."""

    obstacle_id: str
    perceived: Ellipse
    first_seen: float
    last_seen: float


def sonar_scan(state: VehicleState, world: Sequence[Obstacle], cfg: SonarConfig,
               rng: np.random.Generator) -> list[Detection]:
    """Detections for the current pose.

    An obstacle is seen when its nearest boundary point is within range and
    within the field of view. Five noise draws are consumed per detection
    (center x/y, both axes, rotation) in world order, keeping the stream
    deterministic for a given seed and call sequence.
    """
    out: list[Detection] = []
    for o in world:
        q = nearest_boundary_point(state.position, o.ellipse)
        d = dist(state.position, q)
        if d > cfg.range:
            continue
        if abs(wrap_angle(bearing(state.position, q) - state.course)) > cfg.fov_half_angle:
            continue
        scale = d / cfg.range
        n = cfg.noise
        cx = o.ellipse.center.x + float(rng.normal(0.0, n.sigma_pos * scale))
        cy = o.ellipse.center.y + float(rng.normal(0.0, n.sigma_pos * scale))
        a = o.ellipse.a + float(rng.normal(0.0, n.sigma_axes * scale))
        b = o.ellipse.b + float(rng.normal(0.0, n.sigma_axes * scale))
        theta = o.ellipse.theta + float(rng.normal(0.0, n.sigma_theta * scale))
        b = max(b, 0.1)
        a = max(a, b)
        perceived = Ellipse(Point2(cx, cy), a, b, theta)
        out.append(Detection(o.id, perceived, state.time, state.time))
    return out
