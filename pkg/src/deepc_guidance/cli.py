"""Command-line front end: run scenarios, plan routes, compare the reactive
methods and render SVG views.

Exit codes: 0 success / mission completed, 1 input error, 2 mission aborted.
The DEEPC_GUIDANCE_LOG environment variable sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

from .geometry import security_circle
from .graph_planner import (
    InvalidEndpointError,
    NoPathError,
    a_star,
    attach_endpoints,
    build_quadtree,
    build_quadtree_graph,
    build_visibility_graph,
    path_points,
)
from .mission import MissionValidationError, RouteBlockedError
from .reactive_guidance import sample_direction_grid
from .render import SvgScene
from .scenario import Scenario, ScenarioError, load_scenario
from .simulator import Metrics, TrajectoryLog, run_reactive_transit, run_scenario

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ABORTED = 2


def write_trajectory_csv(log_: TrajectoryLog, path: Path) -> None:
    lines = ["t,x,y,psi,u,psi_cmd,u_cmd,mode"]
    for s in log_.samples:
        lines.append(f"{s.time:.6f},{s.position.x:.6f},{s.position.y:.6f},"
                     f"{s.course:.6f},{s.speed:.6f},{s.cmd_course:.6f},"
                     f"{s.cmd_speed:.6f},{s.mode.value}")
    path.write_text("\n".join(lines) + "\n")


def metrics_to_dict(m: Metrics) -> dict:
    return {
        "path_length": m.path_length,
        "completion_time": m.completion_time,
        "max_abs_turn_rate": m.max_abs_turn_rate,
        "min_clearance": None if math.isinf(m.min_clearance) else m.min_clearance,
        "mode_durations": m.mode_durations,
        "outcome": m.outcome,
    }


def write_metrics_json(m: Metrics, path: Path) -> None:
    path.write_text(json.dumps(metrics_to_dict(m), indent=2, sort_keys=True) + "\n")


def write_events_log(log_: TrajectoryLog, path: Path) -> None:
    lines = [f"{t:10.2f}  {text}" for t, text in log_.events]
    path.write_text("\n".join(lines) + ("\n" if lines else ""))


def _scene(scenario: Scenario) -> SvgScene:
    scene = SvgScene(scenario.world.bounds)
    plan = scenario.mission_plan()
    route = [plan.legs[0].start] + [leg.end for leg in plan.legs]
    for o in scenario.world.obstacles:
        scene.add_ellipse(o.ellipse, stroke="#444444", fill="#c9c9c9", opacity=0.8)
        scene.add_circle(security_circle(o, scenario.vcs.security_margin), "#999999")
    scene.add_polyline(route, "#666666", width=1.0, dashed=True)
    scene.add_marker(route[0], "#2c7fb8")
    scene.add_marker(route[-1], "#252525")
    return scene


def _trajectory_svg(scenario: Scenario, log_: TrajectoryLog, path: Path) -> None:
    scene = _scene(scenario)
    scene.add_trajectory([(s.position.x, s.position.y, s.mode.value)
                          for s in log_.samples])
    path.write_text(scene.document())


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log_, metrics = run_scenario(scenario)
    write_trajectory_csv(log_, out / "trajectory.csv")
    write_metrics_json(metrics, out / "metrics.json")
    write_events_log(log_, out / "events.log")
    if args.svg:
        _trajectory_svg(scenario, log_, out / "trajectory.svg")
    print(f"outcome: {metrics.outcome}  time: {metrics.completion_time:.1f} s  "
          f"path: {metrics.path_length:.1f} m")
    return EXIT_OK if metrics.outcome == "completed" else EXIT_ABORTED


def cmd_plan(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    plan = scenario.mission_plan()
    start = plan.legs[0].start
    goal = plan.legs[-1].end
    planner = args.planner or scenario.vcs.planner
    obstacles = scenario.world.obstacles  # omniscient static planning

    t0 = time.perf_counter()
    try:
        if planner == "visibility":
            graph = build_visibility_graph(start, goal, obstacles,
                                           n_poly=scenario.vcs.n_poly,
                                           margin=scenario.vcs.margin)
            s_idx, g_idx = 0, 1
        else:
            root = build_quadtree(scenario.world.bounds, obstacles,
                                  scenario.vcs.quadtree_depth, scenario.vcs.margin)
            graph = build_quadtree_graph(scenario.world.bounds, obstacles,
                                         scenario.vcs.quadtree_depth,
                                         scenario.vcs.margin, root=root)
            graph, s_idx, g_idx = attach_endpoints(graph, root, start, goal)
    except InvalidEndpointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    build_ms = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    try:
        result = a_star(graph, s_idx, g_idx)
    except NoPathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORTED
    search_ms = (time.perf_counter() - t0) * 1000.0

    lines = ["record,a,b,c"]
    for i, v in enumerate(graph.vertices):
        lines.append(f"vertex,{i},{v.x:.6f},{v.y:.6f}")
    for i, j, cost in graph.edges:
        lines.append(f"edge,{i},{j},{cost:.6f}")
    (out / "graph.csv").write_text("\n".join(lines) + "\n")

    pts = path_points(graph, result)
    path_lines = ["index,x,y"]
    path_lines += [f"{i},{p.x:.6f},{p.y:.6f}" for i, p in enumerate(pts)]
    (out / "path.csv").write_text("\n".join(path_lines) + "\n")

    stats = {"planner": planner, "vertices": len(graph.vertices),
             "edges": len(graph.edges), "build_ms": build_ms,
             "search_ms": search_ms, "path_cost": result.total_cost,
             "path_vertices": len(result.vertex_seq),
             "expanded": result.expanded}
    (out / "stats.json").write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n")

    if args.svg:
        scene = _scene(scenario)
        scene.add_graph(graph)
        scene.add_polyline(pts, "#e6550d", width=2.5)
        (out / "plan.svg").write_text(scene.document())
    print(f"{planner}: {len(graph.vertices)} vertices, {len(graph.edges)} edges, "
          f"cost {result.total_cost:.2f}, build {build_ms:.1f} ms, "
          f"search {search_ms:.1f} ms")
    return EXIT_OK


def cmd_compare_reactive(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = {}
    for method in ("geometric", "dipole"):
        log_, metrics = run_reactive_transit(scenario, method)
        rows[method] = metrics_to_dict(metrics)
        if args.svg:
            _trajectory_svg(scenario, log_, out / f"reactive_{method}.svg")

    ratio = None
    if rows["dipole"]["max_abs_turn_rate"] > 0:
        ratio = (rows["geometric"]["max_abs_turn_rate"]
                 / rows["dipole"]["max_abs_turn_rate"])
    doc = {"geometric": rows["geometric"], "dipole": rows["dipole"],
           "turn_rate_ratio_geometric_over_dipole": ratio}
    (out / "compare.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    header = f"{'method':<12}{'outcome':<12}{'time [s]':>10}{'path [m]':>10}" \
             f"{'max|r| [rad/s]':>16}{'clearance [m]':>15}"
    print(header)
    for method in ("geometric", "dipole"):
        r = rows[method]
        clear = r["min_clearance"]
        print(f"{method:<12}{r['outcome']:<12}{r['completion_time']:>10.1f}"
              f"{r['path_length']:>10.1f}{r['max_abs_turn_rate']:>16.4f}"
              f"{(clear if clear is not None else float('nan')):>15.2f}")
    if ratio is not None:
        print(f"max|r| ratio geometric/dipole: {ratio:.3f}")
    ok = all(rows[m]["outcome"] == "completed" for m in rows)
    return EXIT_OK if ok else EXIT_ABORTED


def cmd_render(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scene = _scene(scenario)
    if args.field:
        b = scenario.world.bounds
        n = args.field_resolution
        glyphs = sample_direction_grid(
            args.reactive or scenario.vcs.reactive, scenario.world.obstacles,
            scenario.mission_plan().legs[-1].end, scenario.vcs.reactive_config(),
            b.x0, b.y0, b.size, b.size, n, n)
        scene.add_field_glyphs(glyphs, spacing=b.size / n)
    (out / "scene.svg").write_text(scene.document())
    print(f"wrote {out / 'scene.svg'}")
    return EXIT_OK


def _load(args: argparse.Namespace) -> Scenario:
    scenario = load_scenario(args.scenario)
    if getattr(args, "seed", None) is not None:
        scenario.seed = args.seed
    if getattr(args, "reactive", None):
        scenario.vcs.reactive = args.reactive
    if getattr(args, "planner", None):
        scenario.vcs.planner = args.planner
    return scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deepc-guidance",
        description="AUV guidance toolkit: scenario simulation, path planning "
                    "and reactive-avoidance comparison")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")
        p.add_argument("--svg", action="store_true", help="also write SVG views")

    p_run = sub.add_parser("run", help="simulate a full mission")
    common(p_run)
    p_run.add_argument("--reactive", choices=["geometric", "dipole"], default=None)
    p_run.set_defaults(func=cmd_run)

    p_plan = sub.add_parser("plan", help="static path planning over the true world")
    common(p_plan)
    p_plan.add_argument("--planner", choices=["visibility", "quadtree"], default=None)
    p_plan.set_defaults(func=cmd_plan)

    p_cmp = sub.add_parser("compare-reactive",
                           help="run both reactive methods on one scenario")
    common(p_cmp)
    p_cmp.set_defaults(func=cmd_compare_reactive)

    p_render = sub.add_parser("render", help="render the scenario world to SVG")
    common(p_render)
    p_render.add_argument("--field", action="store_true",
                          help="overlay the reactive direction field")
    p_render.add_argument("--reactive", choices=["geometric", "dipole"], default=None)
    p_render.add_argument("--field-resolution", type=int, default=24)
    p_render.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("DEEPC_GUIDANCE_LOG", "WARNING"))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, MissionValidationError, RouteBlockedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
