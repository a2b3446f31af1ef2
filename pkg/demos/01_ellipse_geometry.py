"""Tour of the planar primitives: containment, tangents, distance, offsets.

Run:  python3 demos/01_ellipse_geometry.py
"""

import math

from deepc_guidance import (
    Ellipse,
    Obstacle,
    Point2,
    SecurityCircle,
    circumscribed_polygon,
    distance_to_ellipse,
    inflate,
    point_in_ellipse,
    ray_ellipse_intersection,
    security_circle,
    segment_intersects_ellipse,
    tangent_points,
)

ellipse = Ellipse(center=Point2(0.0, 0.0), a=20.0, b=8.0, theta=0.4)
print(f"obstacle ellipse: a={ellipse.a} b={ellipse.b} theta={ellipse.theta:.2f} rad")

# containment and signed distance agree on which side of the boundary we are
for p in [Point2(0, 0), Point2(25, 0), Point2(10, 6)]:
    inside = point_in_ellipse(p, ellipse)
    d = distance_to_ellipse(p, ellipse)
    print(f"  point {p}: inside={inside}  signed distance={d:+.3f} m")

# a route leg cutting the obstacle, and one passing clear
leg1 = (Point2(-30, -2), Point2(30, 2))
leg2 = (Point2(-30, 25), Point2(30, 25))
print(f"leg through the middle intersects: {segment_intersects_ellipse(*leg1, ellipse)}")
print(f"offset leg intersects:             {segment_intersects_ellipse(*leg2, ellipse)}")

# grow the ellipse by a safety margin and wrap it in a tangent polygon,
# the way the visibility planner models obstacle corners
grown = inflate(ellipse, 2.5)
corners = circumscribed_polygon(grown, 8)
print(f"inflated to a={grown.a} b={grown.b}; 8-gon corner radii from center:")
print("  " + ", ".join(f"{math.hypot(c.x, c.y):.1f}" for c in corners))

# the reactive layer abstracts the obstacle to its circumscribed circle
circle = security_circle(Obstacle("demo", ellipse), margin=3.0)
print(f"security circle radius: {circle.radius} m")

# tangent points from a vehicle position, the core of sector-1 steering
vehicle = Point2(-45.0, 5.0)
left, right = tangent_points(vehicle, circle)
print(f"tangents from {vehicle}: left={left.x:.2f},{left.y:.2f} "
      f"right={right.x:.2f},{right.y:.2f}")

# where a current ray leaving the center exits the safety ellipse
hit = ray_ellipse_intersection(ellipse.center, Point2(1.0, 0.0), grown)
print(f"eastward ray exits the inflated ellipse at ({hit.x:.2f}, {hit.y:.2f})")
