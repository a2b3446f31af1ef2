"""Closed-loop mission simulation with the special-situations supervisor.

One run is a single-threaded deterministic loop:

    sonar scan -> supervisor -> autopilot -> kinematic step

repeated at a fixed dt until the mission completes, aborts, or the time
budget runs out. The supervisor owns the mode machine that swaps automatic
route following for planned avoidance, reactive avoidance, identification
maneuvers and the return to the route:

* Automatic          follow the current route leg (line of sight with
                     cross-track correction); watch for route conflicts.
* AvoidPlanned       steer along a visibility-graph path from the current
                     position to a rendezvous point on the route past the
                     detected objects.
* AvoidReactive      gradient-line course straight from the current object
                     picture; a fresh plan is attempted every
                     replan_interval and control returns to AvoidPlanned
                     once its first leg is conflict-free.
* IdentifyAlign /    delegate to the identification laws; when they finish,
  IdentifyOrbit      SeekRendezvous leads back to the route.
* SeekRendezvous     AvoidPlanned behavior toward a fresh rendezvous.

The supervisor reads only Detections (and the known environment: current,
route); the true obstacles are visible solely to the sonar and to the
post-run metrics, which keeps the control loop causal with respect to the
simulated sensor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .geometry import (
    Obstacle,
    Point2,
    bearing,
    cross,
    dist,
    distance_to_ellipse,
    inflate,
    segment_cuts_ellipse_interior,
    unit_towards,
    wrap_angle,
)
from .graph_planner import (
    InvalidEndpointError,
    NoPathError,
    a_star,
    build_visibility_graph,
    path_points,
)
from .identification import (
    AlignConfig,
    AlignState,
    IdentPhase,
    OrbitConfig,
    OrbitState,
    align_command,
    orbit_command,
)
from .mission import (
    MissionPlan,
    RouteBlockedError,
    RouteProgress,
    collision_observation,
    goal_point_generation,
    project_onto_route,
)
from .reactive_guidance import ReactiveConfig, SectorMemory, nominal_speed, reactive_course
from .sonar import Detection, SonarConfig, sonar_scan
from .vehicle import (
    GuidanceCommand,
    SeaCurrent,
    VehicleParams,
    VehicleState,
    autopilot_step,
    clamp,
    vehicle_step,
)

if TYPE_CHECKING:  # pragma: no cover
    from .scenario import Scenario


class VcsMode(Enum):
    AUTOMATIC = "Automatic"
    AVOID_PLANNED = "AvoidPlanned"
    AVOID_REACTIVE = "AvoidReactive"
    IDENTIFY_ALIGN = "IdentifyAlign"
    IDENTIFY_ORBIT = "IdentifyOrbit"
    SEEK_RENDEZVOUS = "SeekRendezvous"
    MISSION_COMPLETE = "MissionComplete"
    ABORTED = "Aborted"


TERMINAL_MODES = {VcsMode.MISSION_COMPLETE, VcsMode.ABORTED}


@dataclass
class VcsConfig:
    """Supervisor tuning.

    margin inflates obstacles for planning and conflict checks (vehicle
    half-width plus a navigation buffer); security_margin sizes the
    reactive security circles. lookahead and clear_run default to twice
    the sonar range; goal_step is one vehicle length.
    """

    planner: str = "visibility"
    reactive: str = "geometric"
    margin: float = 2.5
    security_margin: float = 3.0
    capture_radius: float = 3.0
    hysteresis: float = 1.05
    epsilon_singularity: float = 0.5
    reactive_trigger: float = 40.0
    replan_interval: float = 10.0
    lookahead: Optional[float] = None
    clear_run: Optional[float] = None
    goal_step: float = 5.8
    los_lookahead: float = 20.0
    n_poly: int = 16
    quadtree_depth: int = 7
    size_rule_factor: float = 8.0
    align: AlignConfig = field(default_factory=AlignConfig)
    orbit: OrbitConfig = field(default_factory=OrbitConfig)

    def reactive_config(self) -> ReactiveConfig:
        return ReactiveConfig(method=self.reactive, margin=self.security_margin,
                              capture_radius=self.capture_radius,
                              hysteresis=self.hysteresis,
                              epsilon_singularity=self.epsilon_singularity)


@dataclass(frozen=True)
class LogSample:
    time: float
    position: Point2
    course: float
    speed: float
    cmd_course: float
    cmd_speed: float
    mode: VcsMode
    active_ids: tuple[str, ...]


@dataclass
class TrajectoryLog:
    samples: list[LogSample] = field(default_factory=list)
    events: list[tuple[float, str]] = field(default_factory=list)

    def mode_sequence(self) -> list[VcsMode]:
        """Modes in order of first activation (consecutive runs collapsed)."""
        seq: list[VcsMode] = []
        for s in self.samples:
            if not seq or seq[-1] is not s.mode:
                seq.append(s.mode)
        return seq


@dataclass(frozen=True)
class Metrics:
    path_length: float
    completion_time: float
    max_abs_turn_rate: float
    min_clearance: float
    mode_durations: dict[str, float]
    outcome: str


class RunContext:
    """Mutable supervisor state for one run. Holds no true-world obstacles."""

    def __init__(self, plan: MissionPlan, cfg: VcsConfig, params: VehicleParams,
                 current: SeaCurrent, sonar_range: float):
        self.plan = plan
        self.cfg = cfg
        self.params = params
        self.current = current
        self.lookahead = cfg.lookahead if cfg.lookahead is not None else 2.0 * sonar_range
        self.clear_run = cfg.clear_run if cfg.clear_run is not None else 2.0 * sonar_range
        self.mode = VcsMode.AUTOMATIC
        self.progress = RouteProgress()
        self.detections: dict[str, Detection] = {}
        self.new_ids: list[str] = []
        self.polyline: Optional[list[Point2]] = None
        self.polyline_idx = 0
        self.rendezvous: Optional[Point2] = None
        self.rendezvous_arc = 0.0
        self.last_replan = 0.0
        self.align_state = AlignState()
        self.orbit_state = OrbitState()
        self.ident_target: Optional[str] = None
        self.identified: set[str] = set()
        self.sector_memory = SectorMemory()
        self.events: list[tuple[float, str]] = []

    # -- detection bookkeeping -------------------------------------------

    def merge_detections(self, fresh: Sequence[Detection], now: float) -> None:
        self.new_ids = []
        for d in fresh:
            old = self.detections.get(d.obstacle_id)
            if old is None:
                self.detections[d.obstacle_id] = d
                self.new_ids.append(d.obstacle_id)
            else:
                self.detections[d.obstacle_id] = Detection(
                    d.obstacle_id, d.perceived, old.first_seen, now)

    def detected_obstacles(self) -> list[Obstacle]:
        return [Obstacle(i, d.perceived) for i, d in self.detections.items()]

    def perceived(self, obstacle_id: str) -> Obstacle:
        d = self.detections[obstacle_id]
        return Obstacle(obstacle_id, d.perceived)

    # -- events / transitions --------------------------------------------

    def event(self, time: float, text: str) -> None:
        self.events.append((time, text))

    def set_mode(self, time: float, mode: VcsMode, why: str = "") -> None:
        if mode is not self.mode:
            note = f" ({why})" if why else ""
            self.event(time, f"mode {self.mode.value} -> {mode.value}{note}")
            self.mode = mode


def _los_course(leg_start: Point2, leg_end: Point2, p: Point2,
                lookahead: float) -> float:
    """Line-of-sight guidance along a leg with cross-track correction."""
    path_angle = bearing(leg_start, leg_end)
    direction = unit_towards(leg_start, leg_end)
    e = cross(direction, Point2(p.x - leg_start.x, p.y - leg_start.y))
    return wrap_angle(path_angle - math.atan2(e, lookahead))


def _along_track(leg_start: Point2, leg_end: Point2, p: Point2) -> float:
    direction = unit_towards(leg_start, leg_end)
    return (p.x - leg_start.x) * direction.x + (p.y - leg_start.y) * direction.y


def _shaped_speed(base: float, course_now: float, course_cmd: float) -> float:
    """Slow down for large heading changes so turns stay tight.

    At cruise the turn radius is ~14 m; a vehicle commanded to reverse at
    full speed swings far off its leg and misses endpoint captures.
    """
    err = abs(wrap_angle(course_cmd - course_now))
    if err <= math.pi / 6.0:
        return base
    scale = clamp(1.0 - (err - math.pi / 6.0) / (math.pi / 2.0), 0.25, 1.0)
    return max(0.35, base * scale)


def _curvature_limited_speed(p: Point2, obstacles: Sequence[Obstacle],
                             margin: float, base: float,
                             params: VehicleParams) -> float:
    """Cap speed so nearby security circles stay followable.

    The bounded turn rate makes circles of radius below speed/r_max
    impossible to ride; near such a circle the speed is reduced to keep
    the commanded gradient line kinematically feasible.
    """
    speed = base
    for o in obstacles:
        radius = o.ellipse.a + margin
        d = dist(p, o.ellipse.center)
        if d <= 2.0 * radius:
            speed = min(speed, max(0.9 * params.r_max * radius, 0.5))
    return speed


def _ellipse_perimeter(a: float, b: float) -> float:
    # Ramanujan's approximation, plenty for a size threshold
    return math.pi * (3.0 * (a + b) - math.sqrt((3.0 * a + b) * (a + 3.0 * b)))


def vcs_supervisor_step(ctx: RunContext, state: VehicleState) -> GuidanceCommand:
    """One supervisor decision: may switch modes, returns the command."""
    if ctx.mode is VcsMode.AUTOMATIC:
        return _step_automatic(ctx, state)
    if ctx.mode in (VcsMode.AVOID_PLANNED, VcsMode.SEEK_RENDEZVOUS):
        return _step_follow_polyline(ctx, state)
    if ctx.mode is VcsMode.AVOID_REACTIVE:
        return _step_reactive(ctx, state)
    if ctx.mode is VcsMode.IDENTIFY_ALIGN:
        return _step_identify_align(ctx, state)
    if ctx.mode is VcsMode.IDENTIFY_ORBIT:
        return _step_identify_orbit(ctx, state)
    return GuidanceCommand(state.course, 0.0)


def _step_automatic(ctx: RunContext, state: VehicleState) -> GuidanceCommand:
    plan = ctx.plan
    p = state.position
    ctx.progress = project_onto_route(p, plan, ctx.progress)
    leg = plan.legs[ctx.progress.leg_index]

    if (ctx.progress.leg_index == len(plan.legs) - 1
            and dist(p, leg.end) <= ctx.cfg.capture_radius):
        ctx.set_mode(state.time, VcsMode.MISSION_COMPLETE, "route end reached")
        return GuidanceCommand(state.course, 0.0)

    conflicts = collision_observation(plan, ctx.progress, ctx.detected_obstacles(),
                                      ctx.cfg.margin, ctx.lookahead)
    if conflicts:
        first = conflicts[0]
        oid = first.obstacle_id
        if oid in plan.identify_targets and oid not in ctx.identified:
            return _enter_identify(ctx, state, oid)
        return _enter_avoidance(ctx, state, oid)

    # advance to the next leg once the endpoint is captured or passed
    last = ctx.progress.leg_index == len(plan.legs) - 1
    passed = _along_track(leg.start, leg.end, p) >= leg.length - ctx.cfg.capture_radius
    if (dist(p, leg.end) <= ctx.cfg.capture_radius or passed) and not last:
        k = ctx.progress.leg_index + 1
        ctx.progress = RouteProgress(k, plan.cum_lengths[k])
        leg = plan.legs[k]
        passed = False
    if last and passed:
        # overshot the route end without capturing it: close on it directly
        course = bearing(p, leg.end)
    else:
        course = _los_course(leg.start, leg.end, p, ctx.cfg.los_lookahead)
    speed = _shaped_speed(clamp(leg.speed, 0.0, ctx.params.u_max),
                          state.course, course)
    return GuidanceCommand(course, speed)


def _enter_identify(ctx: RunContext, state: VehicleState, oid: str) -> GuidanceCommand:
    obj = ctx.perceived(oid)
    infl = inflate(obj.ellipse, ctx.cfg.margin)
    perimeter = _ellipse_perimeter(infl.a, infl.b)
    ctx.ident_target = oid
    if perimeter <= ctx.cfg.size_rule_factor * ctx.cfg.align.standoff:
        ctx.align_state = AlignState(
            phase=IdentPhase.EVASIVE
            if _alignment_entry(ctx, state, obj) is IdentPhase.EVASIVE
            else IdentPhase.POSITIONING)
        ctx.set_mode(state.time, VcsMode.IDENTIFY_ALIGN, f"identify '{oid}'")
        return _step_identify_align(ctx, state)
    ctx.orbit_state = OrbitState()
    ctx.set_mode(state.time, VcsMode.IDENTIFY_ORBIT, f"identify '{oid}'")
    return _step_identify_orbit(ctx, state)


def _alignment_entry(ctx: RunContext, state: VehicleState, obj: Obstacle) -> IdentPhase:
    from .identification import alignment_mode
    return alignment_mode(state.position, obj, ctx.current)


def _enter_avoidance(ctx: RunContext, state: VehicleState, oid: str) -> GuidanceCommand:
    if not _refresh_rendezvous(ctx, state):
        return GuidanceCommand(state.course, 0.0)
    obj = ctx.perceived(oid)
    if distance_to_ellipse(state.position, obj.ellipse) <= ctx.cfg.reactive_trigger:
        ctx.sector_memory = SectorMemory()
        ctx.last_replan = state.time
        ctx.set_mode(state.time, VcsMode.AVOID_REACTIVE, f"close conflict with '{oid}'")
        return _step_reactive(ctx, state)
    ctx.set_mode(state.time, VcsMode.AVOID_PLANNED, f"conflict with '{oid}'")
    if not _build_polyline(ctx, state):
        ctx.sector_memory = SectorMemory()
        ctx.last_replan = state.time
        ctx.set_mode(state.time, VcsMode.AVOID_REACTIVE, "planner failed")
        return _step_reactive(ctx, state)
    return _step_follow_polyline(ctx, state)


def _refresh_rendezvous(ctx: RunContext, state: VehicleState) -> bool:
    try:
        ctx.rendezvous = goal_point_generation(
            ctx.plan, ctx.progress, ctx.detected_obstacles(), ctx.cfg.margin,
            ctx.clear_run, ctx.cfg.goal_step)
        ctx.rendezvous_arc = project_onto_route(ctx.rendezvous, ctx.plan,
                                                ctx.progress).arc_length
        return True
    except RouteBlockedError as exc:
        ctx.event(state.time, f"route blocked: {exc}")
        ctx.set_mode(state.time, VcsMode.ABORTED, "route blocked")
        return False


def _rendezvous_reached(ctx: RunContext, p: Point2) -> bool:
    """Back at the rendezvous: either at the point itself or rejoined the
    route at / past its arc within the capture corridor."""
    assert ctx.rendezvous is not None
    if dist(p, ctx.rendezvous) <= ctx.cfg.capture_radius:
        return True
    prog = project_onto_route(p, ctx.plan, ctx.progress)
    return (prog.arc_length >= ctx.rendezvous_arc - ctx.cfg.capture_radius
            and dist(p, ctx.plan.point_at(prog.arc_length)) <= ctx.cfg.capture_radius)


def _build_polyline(ctx: RunContext, state: VehicleState) -> bool:
    assert ctx.rendezvous is not None
    try:
        g = build_visibility_graph(state.position, ctx.rendezvous,
                                   ctx.detected_obstacles(),
                                   n_poly=ctx.cfg.n_poly, margin=ctx.cfg.margin)
        result = a_star(g, 0, 1)
    except (InvalidEndpointError, NoPathError) as exc:
        ctx.event(state.time, f"visibility plan failed: {exc}")
        ctx.polyline = None
        return False
    ctx.polyline = path_points(g, result)
    ctx.polyline_idx = 1
    return True


def _return_to_automatic(ctx: RunContext, state: VehicleState) -> GuidanceCommand:
    ctx.polyline = None
    ctx.rendezvous = None
    ctx.progress = project_onto_route(state.position, ctx.plan, ctx.progress)
    ctx.set_mode(state.time, VcsMode.AUTOMATIC, "rendezvous reached")
    return _step_automatic(ctx, state)


def _step_follow_polyline(ctx: RunContext, state: VehicleState) -> GuidanceCommand:
    p = state.position
    if ctx.rendezvous is None:
        # defensive: nothing to steer at
        ctx.set_mode(state.time, VcsMode.ABORTED, "inconsistent avoidance state")
        return GuidanceCommand(state.course, 0.0)
    if ctx.polyline is None and not _build_polyline(ctx, state):
        ctx.sector_memory = SectorMemory()
        ctx.last_replan = state.time
        ctx.set_mode(state.time, VcsMode.AVOID_REACTIVE, "planner failed")
        return _step_reactive(ctx, state)

    assert ctx.polyline is not None
    if _rendezvous_reached(ctx, p) or ctx.polyline_idx >= len(ctx.polyline):
        return _return_to_automatic(ctx, state)
    wp = ctx.polyline[ctx.polyline_idx]
    leg_start = ctx.polyline[ctx.polyline_idx - 1]
    final_wp = ctx.polyline_idx == len(ctx.polyline) - 1
    passed = (leg_start != wp
              and _along_track(leg_start, wp, p) >= dist(leg_start, wp)
              - ctx.cfg.capture_radius)
    if passed and not final_wp:
        ctx.polyline_idx += 1
        leg_start = wp
        wp = ctx.polyline[ctx.polyline_idx]
        final_wp = ctx.polyline_idx == len(ctx.polyline) - 1
        passed = False

    # a brand-new detection cutting the active leg close by demands the
    # reactive level
    for oid in ctx.new_ids:
        obj = ctx.perceived(oid)
        if distance_to_ellipse(p, obj.ellipse) > ctx.cfg.reactive_trigger:
            continue
        if p != wp and segment_cuts_ellipse_interior(
                p, wp, inflate(obj.ellipse, ctx.cfg.margin)):
            ctx.sector_memory = SectorMemory()
            ctx.last_replan = state.time
            ctx.set_mode(state.time, VcsMode.AVOID_REACTIVE,
                         f"new close detection '{oid}'")
            return _step_reactive(ctx, state)

    if final_wp and passed:
        course = bearing(p, wp)
    else:
        course = _los_course(leg_start, wp, p, ctx.cfg.los_lookahead)
    speed = min(nominal_speed(dist(p, ctx.rendezvous), ctx.params.u_cruise,
                              ctx.cfg.capture_radius),
                _shaped_speed(ctx.params.u_cruise, state.course, course))
    return GuidanceCommand(course, speed)


def _step_reactive(ctx: RunContext, state: VehicleState) -> GuidanceCommand:
    p = state.position
    if ctx.rendezvous is None:
        ctx.set_mode(state.time, VcsMode.ABORTED, "inconsistent avoidance state")
        return GuidanceCommand(state.course, 0.0)
    if _rendezvous_reached(ctx, p):
        return _return_to_automatic(ctx, state)

    if state.time - ctx.last_replan >= ctx.cfg.replan_interval:
        ctx.last_replan = state.time
        if not _refresh_rendezvous(ctx, state):
            return GuidanceCommand(state.course, 0.0)
        if _build_polyline(ctx, state) and _first_leg_clear(ctx):
            ctx.set_mode(state.time, VcsMode.AVOID_PLANNED, "fresh plan clear")
            return _step_follow_polyline(ctx, state)

    obstacles = ctx.detected_obstacles()
    course = reactive_course(p, state.course, obstacles, ctx.rendezvous,
                             ctx.cfg.reactive_config(), ctx.sector_memory)
    speed = nominal_speed(dist(p, ctx.rendezvous), ctx.params.u_cruise,
                          ctx.cfg.capture_radius)
    speed = _curvature_limited_speed(p, obstacles, ctx.cfg.security_margin,
                                     speed, ctx.params)
    return GuidanceCommand(course, speed)


def _first_leg_clear(ctx: RunContext) -> bool:
    if not ctx.polyline or len(ctx.polyline) < 2:
        return False
    a, b = ctx.polyline[0], ctx.polyline[1]
    if a == b:
        return True
    for obj in ctx.detected_obstacles():
        if segment_cuts_ellipse_interior(a, b, inflate(obj.ellipse, ctx.cfg.margin)):
            return False
    return True


def _step_identify_align(ctx: RunContext, state: VehicleState) -> GuidanceCommand:
    assert ctx.ident_target is not None
    obj = ctx.perceived(ctx.ident_target)
    before = ctx.align_state.phase
    cmd, ctx.align_state = align_command(
        state.position, state.course, obj, ctx.current, ctx.cfg.align,
        ctx.align_state, ctx.params.dt, cruise_speed=ctx.params.u_cruise,
        max_speed=ctx.params.u_max)
    if ctx.align_state.phase is not before:
        ctx.event(state.time,
                  f"align phase {before.value} -> {ctx.align_state.phase.value}")
    if ctx.align_state.phase is IdentPhase.DONE:
        return _finish_identification(ctx, state)
    return cmd


def _step_identify_orbit(ctx: RunContext, state: VehicleState) -> GuidanceCommand:
    assert ctx.ident_target is not None
    obj = ctx.perceived(ctx.ident_target)
    before = ctx.orbit_state.phase
    cmd, ctx.orbit_state = orbit_command(
        state.position, state.course, obj, ctx.cfg.orbit, ctx.orbit_state,
        cruise_speed=ctx.params.u_cruise)
    if ctx.orbit_state.phase is not before:
        ctx.event(state.time,
                  f"orbit phase {before.value} -> {ctx.orbit_state.phase.value}")
    if ctx.orbit_state.phase is IdentPhase.DONE:
        return _finish_identification(ctx, state)
    return cmd


def _finish_identification(ctx: RunContext, state: VehicleState) -> GuidanceCommand:
    assert ctx.ident_target is not None
    ctx.identified.add(ctx.ident_target)
    ctx.event(state.time, f"identified '{ctx.ident_target}'")
    ctx.ident_target = None
    if not _refresh_rendezvous(ctx, state):
        return GuidanceCommand(state.course, 0.0)
    ctx.set_mode(state.time, VcsMode.SEEK_RENDEZVOUS, "identification done")
    if not _build_polyline(ctx, state):
        ctx.sector_memory = SectorMemory()
        ctx.last_replan = state.time
        ctx.set_mode(state.time, VcsMode.AVOID_REACTIVE, "planner failed")
        return _step_reactive(ctx, state)
    return _step_follow_polyline(ctx, state)


# ---------------------------------------------------------------------------
# run loops
# ---------------------------------------------------------------------------

def initial_state(plan: MissionPlan) -> VehicleState:
    """Underway at the route start: on the first leg heading, at leg speed."""
    leg = plan.legs[0]
    return VehicleState(leg.start, bearing(leg.start, leg.end), leg.speed, 0.0)


def compute_metrics(log: TrajectoryLog, world: Sequence[Obstacle],
                    params: VehicleParams, outcome: str) -> Metrics:
    samples = log.samples
    path_length = sum(dist(a.position, b.position)
                      for a, b in zip(samples, samples[1:]))
    completion_time = samples[-1].time if samples else 0.0
    max_r = 0.0
    for a, b in zip(samples, samples[1:]):
        r = abs(wrap_angle(b.cmd_course - a.cmd_course)) / params.dt
        max_r = max(max_r, r)
    min_clear = math.inf
    for s in samples:
        for o in world:
            min_clear = min(min_clear, distance_to_ellipse(s.position, o.ellipse))
    if not world:
        min_clear = math.inf
    durations: dict[str, float] = {}
    for s in samples[:-1]:
        durations[s.mode.value] = durations.get(s.mode.value, 0.0) + params.dt
    return Metrics(path_length, completion_time, max_r,
                   min_clear if min_clear is not math.inf else float("inf"),
                   durations, outcome)


def run_scenario(scenario: "Scenario") -> tuple[TrajectoryLog, Metrics]:
    """Simulate a full mission under the supervisor. Deterministic per seed."""
    plan = scenario.mission_plan()
    params = scenario.vehicle
    ctx = RunContext(plan, scenario.vcs, params, scenario.world.current,
                     scenario.sonar.range)
    rng = np.random.default_rng(scenario.seed)
    state = initial_state(plan)
    log = TrajectoryLog()

    while True:
        fresh = sonar_scan(state, scenario.world.obstacles, scenario.sonar, rng)
        ctx.merge_detections(fresh, state.time)
        cmd = vcs_supervisor_step(ctx, state)
        if ctx.mode not in TERMINAL_MODES and state.time >= scenario.max_time - 1e-9:
            ctx.set_mode(state.time, VcsMode.ABORTED, "time budget exceeded")
        log.samples.append(LogSample(state.time, state.position, state.course,
                                     state.speed, cmd.desired_course,
                                     cmd.desired_speed, ctx.mode,
                                     tuple(ctx.detections.keys())))
        if ctx.mode in TERMINAL_MODES:
            break
        r, accel = autopilot_step(state, cmd, params)
        state = vehicle_step(state, r, accel, scenario.world.current, params)

    log.events = ctx.events
    outcome = "completed" if ctx.mode is VcsMode.MISSION_COMPLETE else "aborted"
    return log, compute_metrics(log, scenario.world.obstacles, params, outcome)


def run_reactive_transit(scenario: "Scenario", method: str,
                         ) -> tuple[TrajectoryLog, Metrics]:
    """Closed-loop transit from route start to route end under one reactive
    method only, with full knowledge of the true obstacles.

    This is the controlled comparison between the two gradient-line methods:
    identical vehicle, autopilot gains and scenario, only the guidance field
    differs.
    """
    plan = scenario.mission_plan()
    params = scenario.vehicle
    goal = plan.legs[-1].end
    cfg = scenario.vcs
    rcfg = ReactiveConfig(method=method, margin=cfg.security_margin,
                          capture_radius=cfg.capture_radius,
                          hysteresis=cfg.hysteresis,
                          epsilon_singularity=cfg.epsilon_singularity)
    memory = SectorMemory()
    state = initial_state(plan)
    log = TrajectoryLog()
    outcome = "aborted"

    while True:
        if dist(state.position, goal) <= cfg.capture_radius:
            outcome = "completed"
            log.samples.append(LogSample(state.time, state.position, state.course,
                                         state.speed, state.course, 0.0,
                                         VcsMode.MISSION_COMPLETE, ()))
            break
        if state.time >= scenario.max_time - 1e-9:
            log.samples.append(LogSample(state.time, state.position, state.course,
                                         state.speed, state.course, 0.0,
                                         VcsMode.ABORTED, ()))
            break
        course = reactive_course(state.position, state.course,
                                 scenario.world.obstacles, goal, rcfg, memory)
        speed = nominal_speed(dist(state.position, goal), params.u_cruise,
                              cfg.capture_radius)
        speed = _curvature_limited_speed(state.position, scenario.world.obstacles,
                                         cfg.security_margin, speed, params)
        cmd = GuidanceCommand(course, speed)
        log.samples.append(LogSample(state.time, state.position, state.course,
                                     state.speed, cmd.desired_course,
                                     cmd.desired_speed, VcsMode.AVOID_REACTIVE, ()))
        r, accel = autopilot_step(state, cmd, params)
        state = vehicle_step(state, r, accel, scenario.world.current, params)

    return log, compute_metrics(log, scenario.world.obstacles, params, outcome)
