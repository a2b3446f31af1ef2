"""Planar primitives for rotated ellipses, security circles and tangents.

Conventions used throughout the package:

* x is east, y is north, distances are meters.
* Angles are radians, counterclockwise from the +x axis; courses are
  wrapped to (-pi, pi].
* Boundary contact counts as containment / intersection (fail-safe for a
  collision-checking context), except where a caller explicitly asks for
  interior penetration.

All types are immutable values and all functions are pure, so everything
here is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from scipy.optimize import brentq

TWO_PI = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Wrap an angle to the interval (-pi, pi]."""
    return -((-angle + math.pi) % TWO_PI - math.pi)


class Point2(NamedTuple):
    """Planar position (x east, y north), meters. Components must be finite."""

    x: float
    y: float


def dist(p: Point2, q: Point2) -> float:
    """Euclidean distance between two points."""
    return math.hypot(q[0] - p[0], q[1] - p[1])


def bearing(p: Point2, q: Point2) -> float:
    """Direction of travel from p to q, radians CCW from east."""
    return math.atan2(q[1] - p[1], q[0] - p[0])


def unit_towards(p: Point2, q: Point2) -> Point2:
    """Unit vector pointing from p to q. Raises on coincident points."""
    d = dist(p, q)
    if d == 0.0:
        raise ValueError("unit vector undefined for coincident points")
    return Point2((q[0] - p[0]) / d, (q[1] - p[1]) / d)


def cross(u: Point2, v: Point2) -> float:
    """2-D cross product u x v (z component)."""
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class Ellipse:
    """Rotated ellipse: semi-major a, semi-minor b, rotation theta.

    theta is the angle of the major axis from +x, normalized to [0, pi).
    Invariant a >= b > 0 is enforced on construction.
    """

    center: Point2
    a: float
    b: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not (self.a >= self.b > 0.0):
            raise ValueError(f"ellipse axes must satisfy a >= b > 0, got a={self.a}, b={self.b}")
        object.__setattr__(self, "theta", self.theta % math.pi)


@dataclass(frozen=True)
class Obstacle:
    """Elliptical-cylinder obstacle projected onto the horizontal plane.

    z_base and height are carried through from the 3-D description but the
    planners and controllers work purely in the plane.
    """

    id: str
    ellipse: Ellipse
    z_base: float = 0.0
    height: float = 0.0

    def __post_init__(self) -> None:
        if self.height < 0.0:
            raise ValueError(f"obstacle height must be >= 0, got {self.height}")


@dataclass(frozen=True)
class SecurityCircle:
    """Circle used by the reactive sector logic; radius must be positive."""

    center: Point2
    radius: float

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError(f"security circle radius must be > 0, got {self.radius}")


# ---------------------------------------------------------------------------
# frame helpers
# ---------------------------------------------------------------------------

def _to_local(p: Point2, e: Ellipse) -> tuple[float, float]:
    """Coordinates of p in the ellipse frame (centered, rotated by -theta)."""
    ct = math.cos(e.theta)
    st = math.sin(e.theta)
    dx = p[0] - e.center[0]
    dy = p[1] - e.center[1]
    return ct * dx + st * dy, -st * dx + ct * dy


def _from_local(lx: float, ly: float, e: Ellipse) -> Point2:
    ct = math.cos(e.theta)
    st = math.sin(e.theta)
    return Point2(e.center[0] + ct * lx - st * ly, e.center[1] + st * lx + ct * ly)


def _to_scaled(p: Point2, e: Ellipse) -> tuple[float, float]:
    """Map into the frame where the ellipse becomes the unit circle."""
    lx, ly = _to_local(p, e)
    return lx / e.a, ly / e.b


def _scaled_norm2(p: Point2, e: Ellipse) -> float:
    sx, sy = _to_scaled(p, e)
    return sx * sx + sy * sy


# ---------------------------------------------------------------------------
# containment / intersection
# ---------------------------------------------------------------------------

def point_in_ellipse(p: Point2, e: Ellipse) -> bool:
    """True iff p lies in the closed elliptical disk (boundary inclusive)."""
    return _scaled_norm2(p, e) <= 1.0


def _segment_min_scaled_distance(p1: Point2, p2: Point2, e: Ellipse) -> float:
    """Minimum scaled-frame distance from the ellipse center to segment p1-p2.

    In the scaled frame the ellipse is the unit circle, so the segment meets
    the closed elliptical disk iff this value is <= 1.
    """
    x1, y1 = _to_scaled(p1, e)
    x2, y2 = _to_scaled(p2, e)
    vx = x2 - x1
    vy = y2 - y1
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return math.hypot(x1, y1)
    t = -(x1 * vx + y1 * vy) / vv
    t = min(1.0, max(0.0, t))
    return math.hypot(x1 + t * vx, y1 + t * vy)


def segment_intersects_ellipse(p1: Point2, p2: Point2, e: Ellipse) -> bool:
    """True iff the closed segment meets the closed elliptical disk.

    Boundary contact (tangency) counts as intersection. Degenerate segments
    are rejected; use point_in_ellipse for points.
    """
    if p1[0] == p2[0] and p1[1] == p2[1]:
        raise ValueError("degenerate segment: p1 == p2")
    return _segment_min_scaled_distance(p1, p2, e) <= 1.0


def segment_cuts_ellipse_interior(p1: Point2, p2: Point2, e: Ellipse,
                                  tol: float = 1e-9) -> bool:
    """True iff the segment penetrates the open elliptical disk.

    Pure tangency does not count. Visibility-graph edge admissibility uses
    this test: circumscribed-polygon edges are tangent to the inflated
    ellipse by construction, and the safety clearance is provided by the
    inflation margin rather than by rejecting grazing contact.
    """
    if p1[0] == p2[0] and p1[1] == p2[1]:
        raise ValueError("degenerate segment: p1 == p2")
    return _segment_min_scaled_distance(p1, p2, e) < 1.0 - tol


def segment_ellipse_span(p1: Point2, p2: Point2,
                         e: Ellipse) -> Optional[tuple[float, float]]:
    """Parameter interval of segment p1-p2 inside the closed elliptical disk.

    Returns (t_in, t_out) within [0, 1] (t measured from p1), or None when
    the segment stays outside. Tangency yields a zero-length interval.
    """
    x1, y1 = _to_scaled(p1, e)
    x2, y2 = _to_scaled(p2, e)
    dx = x2 - x1
    dy = y2 - y1
    qa = dx * dx + dy * dy
    if qa == 0.0:
        raise ValueError("degenerate segment: p1 == p2")
    qb = 2.0 * (x1 * dx + y1 * dy)
    qc = x1 * x1 + y1 * y1 - 1.0
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    t_in = (-qb - root) / (2.0 * qa)
    t_out = (-qb + root) / (2.0 * qa)
    t_in = max(t_in, 0.0)
    t_out = min(t_out, 1.0)
    if t_in > t_out:
        return None
    return t_in, t_out


# ---------------------------------------------------------------------------
# offsets and enclosures
# ---------------------------------------------------------------------------

def inflate(e: Ellipse, margin: float) -> Ellipse:
    """Grow both semi-axes by margin, preserving center and rotation.

    This is an axis-additive approximation of the true offset curve (which
    is not an ellipse). It is conservative along the axes and slightly thin
    between them; callers size their margins with that in mind.
    """
    if margin < 0.0:
        raise ValueError(f"inflation margin must be >= 0, got {margin}")
    return Ellipse(e.center, e.a + margin, e.b + margin, e.theta)


def circumscribed_polygon(e: Ellipse, n: int) -> list[Point2]:
    """Vertices of an n-gon that contains the ellipse entirely.

    The polygon is the affine image of a regular tangent polygon of the unit
    circle: vertex k sits at parameter angle 2*pi*k/n + pi/n and is pushed
    out by 1/cos(pi/n), so every polygon edge is tangent to the ellipse.
    """
    if n < 3:
        raise ValueError(f"polygon needs at least 3 vertices, got {n}")
    scale = 1.0 / math.cos(math.pi / n)
    out = []
    for k in range(n):
        phi = TWO_PI * k / n + math.pi / n
        lx = e.a * math.cos(phi) * scale
        ly = e.b * math.sin(phi) * scale
        out.append(_from_local(lx, ly, e))
    return out


def security_circle(o: Obstacle, margin: float) -> SecurityCircle:
    """Circumscribed circle of the obstacle grown by margin.

    Radius is a + margin, which contains the ellipse for every rotation.
    Conservative for elongated obstacles by design.
    """
    return SecurityCircle(o.ellipse.center, o.ellipse.a + margin)


# ---------------------------------------------------------------------------
# tangents and rays
# ---------------------------------------------------------------------------

def tangent_points(p: Point2, c: SecurityCircle) -> tuple[Point2, Point2]:
    """Both tangency points of the tangent lines from p to the circle.

    Ordered (left, right) as seen from the circle center looking toward p:
    the left point is counterclockwise from the center-to-p direction.
    p must lie strictly outside the circle.
    """
    dx = p[0] - c.center[0]
    dy = p[1] - c.center[1]
    d = math.hypot(dx, dy)
    if d <= c.radius:
        raise ValueError("tangent points require a point strictly outside the circle")
    alpha = math.atan2(dy, dx)
    beta = math.acos(c.radius / d)
    left = Point2(c.center[0] + c.radius * math.cos(alpha + beta),
                  c.center[1] + c.radius * math.sin(alpha + beta))
    right = Point2(c.center[0] + c.radius * math.cos(alpha - beta),
                   c.center[1] + c.radius * math.sin(alpha - beta))
    return left, right


def ray_ellipse_intersection(origin: Point2, direction: Point2,
                             e: Ellipse) -> Optional[Point2]:
    """Nearest intersection of the ray origin + t*direction with the boundary.

    Returns the boundary point with the smallest parameter t >= 0, or None
    when the ray misses. direction must be non-zero (unit length expected;
    any positive scaling yields the same point).
    """
    if direction[0] == 0.0 and direction[1] == 0.0:
        raise ValueError("ray direction must be non-zero")
    ox, oy = _to_scaled(origin, e)
    ct = math.cos(e.theta)
    st = math.sin(e.theta)
    dx = (ct * direction[0] + st * direction[1]) / e.a
    dy = (-st * direction[0] + ct * direction[1]) / e.b
    qa = dx * dx + dy * dy
    qb = 2.0 * (ox * dx + oy * dy)
    qc = ox * ox + oy * oy - 1.0
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    t1 = (-qb - root) / (2.0 * qa)
    t2 = (-qb + root) / (2.0 * qa)
    eps = 1e-12
    if t1 >= -eps:
        t = max(t1, 0.0)
    elif t2 >= -eps:
        t = max(t2, 0.0)
    else:
        return None
    return Point2(origin[0] + t * direction[0], origin[1] + t * direction[1])


# ---------------------------------------------------------------------------
# nearest boundary point / signed distance
# ---------------------------------------------------------------------------

def nearest_boundary_point(p: Point2, e: Ellipse) -> Point2:
    """Closest point of the ellipse boundary to p.

    Solved in the first quadrant of the ellipse frame via the monotone
    auxiliary equation (a*x0/(t+a^2))^2 + (b*y0/(t+b^2))^2 = 1, which has a
    single root bracketed analytically, so no multi-critical-point fallback
    is needed even inside the evolute. Points on a symmetry axis resolve to
    the non-negative-coordinate candidate.
    """
    lx, ly = _to_local(p, e)
    sx = 1.0 if lx >= 0.0 else -1.0
    sy = 1.0 if ly >= 0.0 else -1.0
    x0 = abs(lx)
    y0 = abs(ly)
    a = e.a
    b = e.b

    if a == b:
        r = math.hypot(x0, y0)
        if r == 0.0:
            qx, qy = a, 0.0
        else:
            qx, qy = a * x0 / r, a * y0 / r
    elif y0 == 0.0:
        xc = (a * a - b * b) / a
        if x0 >= xc:
            qx, qy = a, 0.0
        else:
            qx = a * a * x0 / (a * a - b * b)
            qy = b * math.sqrt(max(0.0, 1.0 - (qx / a) ** 2))
    elif x0 == 0.0:
        qx, qy = 0.0, b
    else:
        def f(t: float) -> float:
            fa = a * x0 / (t + a * a)
            fb = b * y0 / (t + b * b)
            return fa * fa + fb * fb - 1.0

        lo = -b * b + b * y0           # f(lo) >= 0
        hi = -b * b + math.hypot(a * x0, b * y0)  # f(hi) <= 0
        if hi <= lo:
            t = lo
        else:
            t = brentq(f, lo, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200)
        qx = a * a * x0 / (t + a * a)
        qy = b * b * y0 / (t + b * b)

    return _from_local(sx * qx, sy * qy, e)


def distance_to_ellipse(p: Point2, e: Ellipse) -> float:
    """Signed Euclidean distance from p to the ellipse boundary.

    Negative inside, zero on the boundary, positive outside. Accurate to
    well below 1e-6 m.
    """
    q = nearest_boundary_point(p, e)
    d = dist(p, q)
    if _scaled_norm2(p, e) < 1.0:
        return -d
    return d


def ellipse_outward_normal(e: Ellipse, q: Point2) -> Point2:
    """Unit outward normal of the ellipse at boundary point q."""
    lx, ly = _to_local(q, e)
    gx = lx / (e.a * e.a)
    gy = ly / (e.b * e.b)
    norm = math.hypot(gx, gy)
    if norm == 0.0:
        raise ValueError("normal undefined at the ellipse center")
    ct = math.cos(e.theta)
    st = math.sin(e.theta)
    return Point2((ct * gx - st * gy) / norm, (st * gx + ct * gy) / norm)
