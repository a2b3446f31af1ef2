"""Geometric graph construction (visibility / quadtree) and shortest-path search.

Graphs are immutable after construction; searches are pure, so concurrent
searches over one graph are safe. All tie-breaking is deterministic so
repeated runs produce bit-identical results.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

from .geometry import (
    Ellipse,
    Obstacle,
    Point2,
    dist,
    inflate,
    circumscribed_polygon,
    point_in_ellipse,
    segment_cuts_ellipse_interior,
    segment_intersects_ellipse,
)


class NoPathError(Exception):
    """Goal vertex unreachable. Carries the set of vertices reached."""

    def __init__(self, start: int, goal: int, reached: set[int]):
        super().__init__(f"no path from vertex {start} to vertex {goal} "
                         f"({len(reached)} vertices reachable)")
        self.start = start
        self.goal = goal
        self.reached = reached


class InvalidEndpointError(Exception):
    """Start or goal lies inside an inflated obstacle."""

    def __init__(self, which: str, obstacle_id: str):
        super().__init__(f"{which} point lies inside inflated obstacle '{obstacle_id}'")
        self.which = which
        self.obstacle_id = obstacle_id


@dataclass
class GeoGraph:
    """Undirected weighted graph over planar vertices.

    Each edge is stored once as (i, j, cost) and traversable both ways.
    """

    vertices: list[Point2]
    edges: list[tuple[int, int, float]]
    adjacency: list[list[tuple[int, float]]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.vertices)
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for i, j, cost in self.edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) references missing vertex")
            if cost < 0.0:
                raise ValueError(f"negative edge cost {cost} on ({i},{j})")
            adj[i].append((j, cost))
            adj[j].append((i, cost))
        for neighbors in adj:
            neighbors.sort()
        self.adjacency = adj


@dataclass
class PathResult:
    """Vertex sequence from start to goal plus its total cost.

    expanded records how many vertices the search finalized (metadata for
    the A*-versus-Dijkstra effort comparison).
    """

    vertex_seq: list[int]
    total_cost: float
    expanded: int = 0


def dijkstra(g: GeoGraph, s: int, t: int) -> PathResult:
    """Minimum-cost path with a deterministic tie-break.

    Among equal-cost shortest paths the lexicographically smallest vertex
    sequence wins: the heap breaks cost ties on vertex index, neighbors are
    relaxed in index order, and an equal-cost relaxation replaces the parent
    only when it yields a lexicographically smaller prefix path.
    """
    n = len(g.vertices)
    if not (0 <= s < n and 0 <= t < n):
        raise ValueError(f"invalid endpoints {s}, {t} for {n}-vertex graph")
    INF = math.inf
    gdist = [INF] * n
    parent: list[Optional[int]] = [None] * n
    done = [False] * n
    paths: dict[int, tuple[int, ...]] = {}
    gdist[s] = 0.0
    heap: list[tuple[float, int]] = [(0.0, s)]
    expanded = 0

    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        expanded += 1
        paths[u] = (paths[parent[u]] + (u,)) if parent[u] is not None else (u,)
        if u == t:
            break
        for v, w in g.adjacency[u]:
            if done[v]:
                continue
            nd = d + w
            if nd < gdist[v]:
                gdist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == gdist[v] and parent[v] is not None:
                if paths[u] < paths[parent[v]]:
                    parent[v] = u

    if not done[t]:
        raise NoPathError(s, t, {i for i in range(n) if done[i]})
    return PathResult(list(paths[t]), gdist[t], expanded)


def euclidean_heuristic(g: GeoGraph, t: int) -> Callable[[int], float]:
    """Straight-line distance to the goal vertex; admissible for metric costs."""
    goal = g.vertices[t]
    return lambda v: dist(g.vertices[v], goal)


def a_star(g: GeoGraph, s: int, t: int,
           heuristic: Optional[Callable[[int], float]] = None) -> PathResult:
    """A* search; returns the same total cost as dijkstra on any graph.

    The default heuristic is the Euclidean distance to the goal vertex,
    admissible because edge costs are Euclidean lengths.
    """
    n = len(g.vertices)
    if not (0 <= s < n and 0 <= t < n):
        raise ValueError(f"invalid endpoints {s}, {t} for {n}-vertex graph")
    if heuristic is None:
        heuristic = euclidean_heuristic(g, t)

    INF = math.inf
    gdist = [INF] * n
    parent: list[Optional[int]] = [None] * n
    done = [False] * n
    gdist[s] = 0.0
    heap: list[tuple[float, int]] = [(heuristic(s), s)]
    expanded = 0

    while heap:
        f, u = heapq.heappop(heap)
        if done[u] or f > gdist[u] + heuristic(u) + 1e-12:
            continue
        done[u] = True
        expanded += 1
        if u == t:
            break
        for v, w in g.adjacency[u]:
            nd = gdist[u] + w
            if nd < gdist[v]:
                gdist[v] = nd
                parent[v] = u
                done[v] = False
                heapq.heappush(heap, (nd + heuristic(v), v))

    if not done[t]:
        raise NoPathError(s, t, {i for i in range(n) if done[i]})
    seq = [t]
    while seq[-1] != s:
        seq.append(parent[seq[-1]])
    seq.reverse()
    return PathResult(seq, gdist[t], expanded)


# ---------------------------------------------------------------------------
# visibility graph
# ---------------------------------------------------------------------------

def build_visibility_graph(start: Point2, goal: Point2,
                           obstacles: Sequence[Obstacle],
                           n_poly: int = 16, margin: float = 2.5) -> GeoGraph:
    """Visibility graph over polygonized, inflated obstacles.

    Vertices are start, goal, and the corners of the circumscribed n_poly-gon
    of each inflated obstacle (corners falling inside another inflated
    obstacle are dropped). An edge joins every vertex pair whose segment does
    not penetrate any inflated obstacle interior; polygon edges are tangent
    to their own inflated ellipse by construction, so grazing contact is
    admissible and the margin supplies the physical clearance. Edge cost is
    Euclidean length.
    """
    inflated = [(o.id, inflate(o.ellipse, margin)) for o in obstacles]
    for oid, e in inflated:
        if point_in_ellipse(start, e):
            raise InvalidEndpointError("start", oid)
        if point_in_ellipse(goal, e):
            raise InvalidEndpointError("goal", oid)

    vertices: list[Point2] = [start, goal]
    for k, (oid, e) in enumerate(inflated):
        for corner in circumscribed_polygon(e, n_poly):
            if any(point_in_ellipse(corner, other)
                   for m, (_, other) in enumerate(inflated) if m != k):
                continue
            vertices.append(corner)

    edges: list[tuple[int, int, float]] = []
    nv = len(vertices)
    for i in range(nv):
        pi = vertices[i]
        for j in range(i + 1, nv):
            pj = vertices[j]
            if pi == pj:
                continue
            if any(segment_cuts_ellipse_interior(pi, pj, e) for _, e in inflated):
                continue
            edges.append((i, j, dist(pi, pj)))
    return GeoGraph(vertices, edges)


# ---------------------------------------------------------------------------
# quadtree graph
# ---------------------------------------------------------------------------

class CellState(Enum):
    FREE = "free"
    OCCUPIED = "occupied"
    MIXED = "mixed"


@dataclass(frozen=True)
class SquareBounds:
    """Axis-aligned square: minimum corner plus side length."""

    x0: float
    y0: float
    size: float

    def __post_init__(self) -> None:
        if self.size <= 0.0:
            raise ValueError(f"square side must be > 0, got {self.size}")

    def contains(self, p: Point2) -> bool:
        return (self.x0 <= p[0] <= self.x0 + self.size
                and self.y0 <= p[1] <= self.y0 + self.size)

    @property
    def center(self) -> Point2:
        return Point2(self.x0 + 0.5 * self.size, self.y0 + 0.5 * self.size)


@dataclass(frozen=True)
class QuadCell:
    """Node of the quadtree decomposition.

    Children (when present) partition the parent square exactly; leaves are
    FREE or OCCUPIED only, MIXED appears only on interior nodes.
    """

    bounds: SquareBounds
    state: CellState
    depth: int
    children: Optional[tuple["QuadCell", "QuadCell", "QuadCell", "QuadCell"]] = None

    def leaves(self) -> list["QuadCell"]:
        if self.children is None:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out


def _rect_edges(b: SquareBounds) -> list[tuple[Point2, Point2]]:
    p00 = Point2(b.x0, b.y0)
    p10 = Point2(b.x0 + b.size, b.y0)
    p11 = Point2(b.x0 + b.size, b.y0 + b.size)
    p01 = Point2(b.x0, b.y0 + b.size)
    return [(p00, p10), (p10, p11), (p11, p01), (p01, p00)]


def _rect_corners(b: SquareBounds) -> list[Point2]:
    return [Point2(b.x0, b.y0), Point2(b.x0 + b.size, b.y0),
            Point2(b.x0 + b.size, b.y0 + b.size), Point2(b.x0, b.y0 + b.size)]


def _rect_overlaps_ellipse(b: SquareBounds, e: Ellipse) -> bool:
    # exact for convex shapes: boundary contact, rect corner inside ellipse,
    # or ellipse center inside rect
    for p1, p2 in _rect_edges(b):
        if segment_intersects_ellipse(p1, p2, e):
            return True
    if point_in_ellipse(Point2(b.x0, b.y0), e):
        return True
    return b.contains(e.center)


def _rect_inside_ellipse(b: SquareBounds, e: Ellipse) -> bool:
    # the ellipse disk is convex, so corner containment implies containment
    return all(point_in_ellipse(c, e) for c in _rect_corners(b))


def cell_classification(bounds: SquareBounds, obstacles: Sequence[Obstacle],
                        margin: float) -> CellState:
    """Classify a square cell against the inflated obstacles.

    Conservative: any overlap that is neither full containment nor clear
    separation resolves to MIXED.
    """
    inflated = [inflate(o.ellipse, margin) for o in obstacles]
    return _classify(bounds, inflated)


def _classify(bounds: SquareBounds, inflated: Sequence[Ellipse]) -> CellState:
    overlap = False
    for e in inflated:
        if _rect_inside_ellipse(bounds, e):
            return CellState.OCCUPIED
        if not overlap and _rect_overlaps_ellipse(bounds, e):
            overlap = True
    return CellState.MIXED if overlap else CellState.FREE


def build_quadtree(bounds: SquareBounds, obstacles: Sequence[Obstacle],
                   max_depth: int, margin: float = 2.5) -> QuadCell:
    """Recursive 4-way decomposition of the region down to max_depth.

    MIXED cells split until max_depth, where any remaining MIXED cell is
    classified OCCUPIED (fail-safe).
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    inflated = [inflate(o.ellipse, margin) for o in obstacles]

    def build(b: SquareBounds, depth: int) -> QuadCell:
        state = _classify(b, inflated)
        if state is not CellState.MIXED:
            return QuadCell(b, state, depth)
        if depth >= max_depth:
            return QuadCell(b, CellState.OCCUPIED, depth)
        half = b.size / 2.0
        children = (
            build(SquareBounds(b.x0, b.y0, half), depth + 1),
            build(SquareBounds(b.x0 + half, b.y0, half), depth + 1),
            build(SquareBounds(b.x0, b.y0 + half, half), depth + 1),
            build(SquareBounds(b.x0 + half, b.y0 + half, half), depth + 1),
        )
        return QuadCell(b, CellState.MIXED, depth, children)

    return build(bounds, 0)


def build_quadtree_graph(bounds: SquareBounds, obstacles: Sequence[Obstacle],
                         max_depth: int, margin: float = 2.5,
                         root: Optional[QuadCell] = None) -> GeoGraph:
    """Graph whose vertices are the centers of free quadtree leaves.

    Two free leaves are connected iff their closed boundaries share a
    segment of positive length (4-neighborhood across depths; corner-only
    contact is not adjacency). Edge cost is the Euclidean distance between
    the cell centers.
    """
    if root is None:
        root = build_quadtree(bounds, obstacles, max_depth, margin)
    free = [leaf for leaf in root.leaves() if leaf.state is CellState.FREE]
    vertices = [leaf.bounds.center for leaf in free]

    # integer fine-grid spans avoid float boundary comparisons entirely
    deepest = max((leaf.depth for leaf in free), default=0)
    fine = 1 << deepest
    cell_unit = bounds.size / fine

    spans = []
    for leaf in free:
        scale = 1 << (deepest - leaf.depth)
        ix = round((leaf.bounds.x0 - bounds.x0) / bounds.size * (1 << leaf.depth))
        iy = round((leaf.bounds.y0 - bounds.y0) / bounds.size * (1 << leaf.depth))
        spans.append((ix * scale, iy * scale, scale))

    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()

    by_right: dict[int, list[tuple[int, int, int]]] = {}
    by_left: dict[int, list[tuple[int, int, int]]] = {}
    by_top: dict[int, list[tuple[int, int, int]]] = {}
    by_bottom: dict[int, list[tuple[int, int, int]]] = {}
    for idx, (fx, fy, s) in enumerate(spans):
        by_right.setdefault(fx + s, []).append((fy, fy + s, idx))
        by_left.setdefault(fx, []).append((fy, fy + s, idx))
        by_top.setdefault(fy + s, []).append((fx, fx + s, idx))
        by_bottom.setdefault(fy, []).append((fx, fx + s, idx))

    def pair_up(side_a: dict[int, list], side_b: dict[int, list]) -> None:
        for coord, a_items in side_a.items():
            b_items = side_b.get(coord)
            if not b_items:
                continue
            for lo_a, hi_a, ia in a_items:
                for lo_b, hi_b, ib in b_items:
                    if lo_a < hi_b and lo_b < hi_a:  # positive-length overlap
                        key = (min(ia, ib), max(ia, ib))
                        if key not in seen:
                            seen.add(key)
                            edges.append((key[0], key[1],
                                          dist(vertices[key[0]], vertices[key[1]])))

    pair_up(by_right, by_left)
    pair_up(by_top, by_bottom)
    edges.sort(key=lambda e: (e[0], e[1]))
    return GeoGraph(vertices, edges)


def attach_endpoints(graph: GeoGraph, root: QuadCell,
                     start: Point2, goal: Point2) -> tuple[GeoGraph, int, int]:
    """Extend a quadtree graph with start/goal vertices for path search.

    Each endpoint is linked to the center of the free leaf containing it
    (the straight connector stays inside that free cell). Raises
    InvalidEndpointError when an endpoint falls in occupied space.
    """
    free = [leaf for leaf in root.leaves() if leaf.state is CellState.FREE]
    centers = {leaf.bounds.center: i for i, leaf in enumerate(free)}

    def owner(p: Point2, which: str) -> int:
        for leaf in free:
            if leaf.bounds.contains(p):
                return centers[leaf.bounds.center]
        raise InvalidEndpointError(which, "occupied-cell")

    si = owner(start, "start")
    gi = owner(goal, "goal")
    vertices = list(graph.vertices) + [start, goal]
    s_idx = len(vertices) - 2
    g_idx = len(vertices) - 1
    edges = list(graph.edges)
    edges.append((si, s_idx, dist(start, vertices[si])))
    edges.append((gi, g_idx, dist(goal, vertices[gi])))
    return GeoGraph(vertices, edges), s_idx, g_idx


def path_points(g: GeoGraph, result: PathResult) -> list[Point2]:
    """Polyline of the path's vertex positions."""
    return [g.vertices[i] for i in result.vertex_seq]
