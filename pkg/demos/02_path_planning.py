"""Visibility graph versus quadtree decomposition on the same world.

Builds both graphs over the planner-comparison scenario, searches them with
A*, prints the numbers behind the planner trade-off and writes an SVG of
each graph + path into demos/output/.

Run:  python3 demos/02_path_planning.py
"""

import time
from pathlib import Path

from deepc_guidance import load_scenario
from deepc_guidance.graph_planner import (
    a_star,
    attach_endpoints,
    build_quadtree,
    build_quadtree_graph,
    build_visibility_graph,
    dijkstra,
    path_points,
)
from deepc_guidance.geometry import security_circle
from deepc_guidance.render import SvgScene

HERE = Path(__file__).resolve().parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

scenario = load_scenario(HERE.parent / "scenarios" / "planner_comparison.json")
plan = scenario.mission_plan()
start, goal = plan.legs[0].start, plan.legs[-1].end
obstacles = scenario.world.obstacles
margin = scenario.vcs.margin
print(f"world: {len(obstacles)} obstacles, route {start} -> {goal}")

# --- visibility graph: obstacle corners become vertices -------------------
t0 = time.perf_counter()
vis = build_visibility_graph(start, goal, obstacles, n_poly=16, margin=margin)
vis_path = a_star(vis, 0, 1)
t_vis = time.perf_counter() - t0
print(f"visibility: {len(vis.vertices)} vertices / {len(vis.edges)} edges, "
      f"path {vis_path.total_cost:.1f} m, {t_vis * 1e3:.1f} ms, "
      f"{vis_path.expanded} expansions")

# --- quadtree: free-space cell centers become vertices --------------------
t0 = time.perf_counter()
root = build_quadtree(scenario.world.bounds, obstacles, max_depth=7, margin=margin)
quad = build_quadtree_graph(scenario.world.bounds, obstacles, 7, margin, root=root)
quad2, si, gi = attach_endpoints(quad, root, start, goal)
quad_path = a_star(quad2, si, gi)
t_quad = time.perf_counter() - t0
print(f"quadtree:   {len(quad2.vertices)} vertices / {len(quad2.edges)} edges, "
      f"path {quad_path.total_cost:.1f} m, {t_quad * 1e3:.1f} ms, "
      f"{quad_path.expanded} expansions")

print(f"-> visibility path is {quad_path.total_cost - vis_path.total_cost:.1f} m "
      f"shorter and {t_quad / t_vis:.1f}x faster to produce")

# A* never returns a different cost than Dijkstra, just less work
d = dijkstra(vis, 0, 1)
print(f"A* vs Dijkstra on the visibility graph: "
      f"{vis_path.total_cost:.3f} vs {d.total_cost:.3f} m, "
      f"{vis_path.expanded} vs {d.expanded} expansions")

# --- draw both -------------------------------------------------------------
for name, graph, result in [("visibility", vis, vis_path),
                            ("quadtree", quad2, quad_path)]:
    scene = SvgScene(scenario.world.bounds)
    for o in obstacles:
        scene.add_ellipse(o.ellipse, stroke="#444444", fill="#c9c9c9", opacity=0.8)
        scene.add_circle(security_circle(o, scenario.vcs.security_margin), "#bbbbbb")
    scene.add_graph(graph)
    scene.add_polyline(path_points(graph, result), "#e6550d", width=2.5)
    path = OUT / f"planning_{name}.svg"
    path.write_text(scene.document())
    print(f"wrote {path}")
