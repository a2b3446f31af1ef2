"""Scenario files: strict JSON loading, validation and writing.

A scenario is one JSON document (schema shipped as scenario.schema.json
next to this module). Unknown keys are rejected everywhere so typos in
safety parameters fail loudly; every validation problem is reported with
its field path.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import jsonschema

from .geometry import Ellipse, Obstacle, Point2
from .graph_planner import SquareBounds
from .identification import AlignConfig, OrbitConfig
from .mission import ComplexManeuver, Meander, MissionPlan, Track, expand_mission
from .simulator import VcsConfig
from .sonar import SonarConfig, SonarNoise
from .vehicle import SeaCurrent, VehicleParams

log = logging.getLogger(__name__)


class ScenarioError(Exception):
    """Base for everything load_scenario can raise on bad input."""


class ScenarioParseError(ScenarioError):
    def __init__(self, path: str, line: int, column: int, reason: str):
        super().__init__(f"{path}:{line}:{column}: {reason}")
        self.line = line
        self.column = column


class ScenarioValidationError(ScenarioError):
    def __init__(self, field_path: str, reason: str):
        super().__init__(f"{field_path}: {reason}")
        self.field_path = field_path


class UnsupportedManeuverError(ScenarioError):
    def __init__(self, field_path: str, kind: str):
        super().__init__(f"{field_path}: unsupported maneuver '{kind}'")
        self.field_path = field_path
        self.kind = kind


@dataclass
class World:
    bounds: SquareBounds
    obstacles: list[Obstacle] = field(default_factory=list)
    current: SeaCurrent = field(default_factory=SeaCurrent)


@dataclass
class Scenario:
    world: World
    vehicle: VehicleParams
    sonar: SonarConfig
    maneuvers: list[ComplexManeuver]
    identify_targets: list[str]
    vcs: VcsConfig
    seed: int = 0
    max_time: float = 3600.0

    def mission_plan(self) -> MissionPlan:
        return expand_mission(self.maneuvers, self.identify_targets)


def _schema() -> dict:
    text = resources.files("deepc_guidance").joinpath("scenario.schema.json").read_text()
    return json.loads(text)


def _format_path(error: jsonschema.ValidationError) -> str:
    parts = []
    for item in error.absolute_path:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts) or "<document root>"


def _point(raw: list) -> Point2:
    p = Point2(float(raw[0]), float(raw[1]))
    if not (math.isfinite(p.x) and math.isfinite(p.y)):
        raise ScenarioValidationError("point", "coordinates must be finite")
    return p


def _mission_points(maneuvers: list[ComplexManeuver]) -> list[Point2]:
    pts = []
    for m in maneuvers:
        if isinstance(m, Track):
            pts.extend([m.start, m.end])
        else:
            n = int(math.floor(m.width / m.lane_spacing)) + 1
            hx, hy = math.cos(m.heading), math.sin(m.heading)
            px, py = -hy, hx
            for lane in range(n):
                ox = m.origin.x + lane * m.lane_spacing * px
                oy = m.origin.y + lane * m.lane_spacing * py
                pts.append(Point2(ox, oy))
                pts.append(Point2(ox + m.length * hx, oy + m.length * hy))
    return pts


def _default_bounds(maneuvers: list[ComplexManeuver],
                    obstacles: list[Obstacle]) -> SquareBounds:
    xs, ys = [], []
    for p in _mission_points(maneuvers):
        xs.append(p.x)
        ys.append(p.y)
    for o in obstacles:
        xs.extend([o.ellipse.center.x - o.ellipse.a, o.ellipse.center.x + o.ellipse.a])
        ys.extend([o.ellipse.center.y - o.ellipse.a, o.ellipse.center.y + o.ellipse.a])
    pad = 50.0
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    size = max(x1 - x0, y1 - y0)
    return SquareBounds(x0, y0, size)


def scenario_from_dict(doc: dict[str, Any]) -> Scenario:
    """Validate a parsed document and build the typed scenario."""
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise ScenarioValidationError(_format_path(err), err.message)

    world_doc = doc.get("world", {})
    obstacles: list[Obstacle] = []
    seen_ids: set[str] = set()
    for i, od in enumerate(world_doc.get("obstacles", [])):
        where = f"world.obstacles[{i}]"
        if od["a"] < od["b"]:
            raise ScenarioValidationError(
                f"{where}.a", f"semi-major {od['a']} must be >= semi-minor {od['b']}")
        if od["id"] in seen_ids:
            raise ScenarioValidationError(f"{where}.id", f"duplicate id '{od['id']}'")
        seen_ids.add(od["id"])
        if od.get("z_base", 0.0) != 0.0 or od.get("height", 0.0) != 0.0:
            log.warning("%s: depth extent (z_base/height) is ingested but ignored; "
                        "the simulated world is one horizontal plane", where)
        obstacles.append(Obstacle(od["id"],
                                  Ellipse(_point(od["center"]), float(od["a"]),
                                          float(od["b"]), float(od.get("theta", 0.0))),
                                  float(od.get("z_base", 0.0)),
                                  float(od.get("height", 0.0))))

    cur_doc = world_doc.get("current", {})
    current = SeaCurrent(float(cur_doc.get("vx", 0.0)), float(cur_doc.get("vy", 0.0)))

    maneuvers: list[ComplexManeuver] = []
    mission_doc = doc["mission"]
    for i, md in enumerate(mission_doc["maneuvers"]):
        where = f"mission.maneuvers[{i}]"
        kind = md["type"]
        if kind == "track":
            maneuvers.append(Track(_point(md["from"]), _point(md["to"]),
                                   float(md["speed"])))
        elif kind == "meander":
            maneuvers.append(Meander(_point(md["origin"]), float(md["heading"]),
                                     float(md["length"]), float(md["width"]),
                                     float(md["lane_spacing"]), float(md["speed"])))
        else:
            raise UnsupportedManeuverError(f"{where}.type", kind)

    identify_targets = list(mission_doc.get("identify_targets", []))
    for j, target in enumerate(identify_targets):
        if target not in seen_ids:
            raise ScenarioValidationError(
                f"mission.identify_targets[{j}]",
                f"'{target}' does not name a world obstacle")

    vp = doc.get("vehicle", {})
    vehicle = VehicleParams(**{k: float(v) for k, v in vp.items()})
    if vehicle.u_cruise > vehicle.u_max:
        raise ScenarioValidationError("vehicle.u_cruise",
                                      "cruise speed exceeds u_max")

    sd = doc.get("sonar", {})
    noise = SonarNoise(**{k: float(v) for k, v in sd.get("noise", {}).items()})
    sonar_kwargs = {k: float(v) for k, v in sd.items() if k != "noise"}
    sonar = SonarConfig(noise=noise, **sonar_kwargs)

    vd = dict(doc.get("vcs", {}))
    align = AlignConfig(**{k: float(v) for k, v in vd.pop("align", {}).items()})
    orbit_doc = vd.pop("orbit", {})
    orbit = OrbitConfig(**{k: (v if k == "direction" else float(v))
                           for k, v in orbit_doc.items()})
    for int_key in ("n_poly", "quadtree_depth"):
        if int_key in vd:
            vd[int_key] = int(vd[int_key])
    vcs = VcsConfig(align=align, orbit=orbit, **vd)

    if "bounds" in world_doc:
        bd = world_doc["bounds"]
        bounds = SquareBounds(float(bd["x0"]), float(bd["y0"]), float(bd["size"]))
        for k, p in enumerate(_mission_points(maneuvers)):
            if not bounds.contains(p):
                raise ScenarioValidationError(
                    "world.bounds", f"mission point ({p.x:g}, {p.y:g}) lies outside")
    else:
        bounds = _default_bounds(maneuvers, obstacles)

    return Scenario(World(bounds, obstacles, current), vehicle, sonar,
                    maneuvers, identify_targets, vcs,
                    seed=int(doc.get("seed", 0)),
                    max_time=float(doc.get("max_time", 3600.0)))


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Parse and validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(str(path), exc.lineno, exc.colno, exc.msg) from exc
    if not isinstance(doc, dict):
        raise ScenarioValidationError("<document root>", "scenario must be a JSON object")
    return scenario_from_dict(doc)


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    """Serializable document equivalent to the scenario (round-trips)."""
    maneuvers = []
    for m in s.maneuvers:
        if isinstance(m, Track):
            maneuvers.append({"type": "track", "from": [m.start.x, m.start.y],
                              "to": [m.end.x, m.end.y], "speed": m.speed})
        else:
            maneuvers.append({"type": "meander", "origin": [m.origin.x, m.origin.y],
                              "heading": m.heading, "length": m.length,
                              "width": m.width, "lane_spacing": m.lane_spacing,
                              "speed": m.speed})
    return {
        "world": {
            "bounds": {"x0": s.world.bounds.x0, "y0": s.world.bounds.y0,
                       "size": s.world.bounds.size},
            "obstacles": [{"id": o.id,
                           "center": [o.ellipse.center.x, o.ellipse.center.y],
                           "a": o.ellipse.a, "b": o.ellipse.b,
                           "theta": o.ellipse.theta,
                           "z_base": o.z_base, "height": o.height}
                          for o in s.world.obstacles],
            "current": {"vx": s.world.current.vx, "vy": s.world.current.vy},
        },
        "vehicle": {"u_cruise": s.vehicle.u_cruise, "u_max": s.vehicle.u_max,
                    "r_max": s.vehicle.r_max, "k_course": s.vehicle.k_course,
                    "k_speed": s.vehicle.k_speed, "a_max": s.vehicle.a_max,
                    "dt": s.vehicle.dt},
        "sonar": {"range": s.sonar.range, "fov_half_angle": s.sonar.fov_half_angle,
                  "noise": {"sigma_pos": s.sonar.noise.sigma_pos,
                            "sigma_axes": s.sonar.noise.sigma_axes,
                            "sigma_theta": s.sonar.noise.sigma_theta}},
        "mission": {"maneuvers": maneuvers,
                    "identify_targets": list(s.identify_targets)},
        "vcs": {"planner": s.vcs.planner, "reactive": s.vcs.reactive,
                "margin": s.vcs.margin, "security_margin": s.vcs.security_margin,
                "capture_radius": s.vcs.capture_radius,
                "hysteresis": s.vcs.hysteresis,
                "epsilon_singularity": s.vcs.epsilon_singularity,
                "reactive_trigger": s.vcs.reactive_trigger,
                "replan_interval": s.vcs.replan_interval,
                **({"lookahead": s.vcs.lookahead} if s.vcs.lookahead is not None else {}),
                **({"clear_run": s.vcs.clear_run} if s.vcs.clear_run is not None else {}),
                "goal_step": s.vcs.goal_step, "los_lookahead": s.vcs.los_lookahead,
                "n_poly": s.vcs.n_poly, "quadtree_depth": s.vcs.quadtree_depth,
                "size_rule_factor": s.vcs.size_rule_factor,
                "align": {"standoff": s.vcs.align.standoff,
                          "safety_margin": s.vcs.align.safety_margin,
                          "position_tolerance": s.vcs.align.position_tolerance,
                          "course_tolerance": s.vcs.align.course_tolerance,
                          "hold_time": s.vcs.align.hold_time,
                          "station_gain": s.vcs.align.station_gain},
                "orbit": {"target_distance": s.vcs.orbit.target_distance,
                          "direction": s.vcs.orbit.direction,
                          "mode_switch_threshold": s.vcs.orbit.mode_switch_threshold,
                          "cross_track_gain": s.vcs.orbit.cross_track_gain}},
        "seed": s.seed,
        "max_time": s.max_time,
    }
