"""2-D guidance and obstacle-avoidance toolkit for an autonomous underwater
vehicle: exact ellipse geometry, visibility/quadtree path planning,
gradient-line reactive avoidance, object-identification maneuvers and a
deterministic closed-loop mission simulator.
"""

__version__ = "0.1.0"

from .geometry import (
    Ellipse,
    Obstacle,
    Point2,
    SecurityCircle,
    circumscribed_polygon,
    distance_to_ellipse,
    inflate,
    nearest_boundary_point,
    point_in_ellipse,
    ray_ellipse_intersection,
    security_circle,
    segment_intersects_ellipse,
    tangent_points,
    wrap_angle,
)
from .graph_planner import (
    GeoGraph,
    NoPathError,
    InvalidEndpointError,
    PathResult,
    QuadCell,
    SquareBounds,
    a_star,
    build_quadtree_graph,
    build_visibility_graph,
    dijkstra,
)
from .identification import (
    AlignConfig,
    IdentPhase,
    OrbitConfig,
    align_command,
    alignment_mode,
    flow_shade_goal,
    orbit_command,
    orbit_distance_error,
)
from .mission import (
    BasisManeuver,
    Conflict,
    Meander,
    MissionPlan,
    RouteProgress,
    Track,
    collision_observation,
    expand_mission,
    goal_point_generation,
    project_onto_route,
)
from .reactive_guidance import (
    GradientSample,
    ReactiveConfig,
    SectorClass,
    classify_sector,
    dipole_field,
    geometric_gradient,
    reactive_course,
)
from .scenario import Scenario, load_scenario
from .simulator import (
    Metrics,
    TrajectoryLog,
    VcsConfig,
    VcsMode,
    run_reactive_transit,
    run_scenario,
)
from .sonar import Detection, SonarConfig, sonar_scan
from .vehicle import (
    GuidanceCommand,
    SeaCurrent,
    VehicleParams,
    VehicleState,
    autopilot_step,
    vehicle_step,
)
