"""Deterministic SVG rendering of worlds, graphs, fields and trajectories.

Output is assembled from fixed-precision strings so identical inputs yield
byte-identical documents.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .geometry import Ellipse, Point2, SecurityCircle
from .graph_planner import GeoGraph, SquareBounds

MODE_COLORS = {
    "Automatic": "#2c7fb8",
    "AvoidPlanned": "#41ab5d",
    "AvoidReactive": "#e6550d",
    "IdentifyAlign": "#756bb1",
    "IdentifyOrbit": "#d63ea8",
    "SeekRendezvous": "#8c9e2f",
    "MissionComplete": "#252525",
    "Aborted": "#d62728",
}

GLYPH_LEN_FRACTION = 0.35  # of the glyph grid spacing


def _f(v: float) -> str:
    return f"{v:.3f}"


class SvgScene:
    """Accumulates drawing primitives over a square world region."""

    def __init__(self, bounds: SquareBounds, width_px: int = 800):
        self.bounds = bounds
        self.width_px = width_px
        self.scale = width_px / bounds.size
        self._body: list[str] = []

    def _x(self, x: float) -> float:
        return (x - self.bounds.x0) * self.scale

    def _y(self, y: float) -> float:
        return (self.bounds.y0 + self.bounds.size - y) * self.scale

    def add_ellipse(self, e: Ellipse, stroke: str, fill: str = "none",
                    dashed: bool = False, opacity: float = 1.0) -> None:
        cx, cy = self._x(e.center.x), self._y(e.center.y)
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        rot = -math.degrees(e.theta)
        self._body.append(
            f'<ellipse cx="{_f(cx)}" cy="{_f(cy)}" rx="{_f(e.a * self.scale)}" '
            f'ry="{_f(e.b * self.scale)}" '
            f'transform="rotate({_f(rot)} {_f(cx)} {_f(cy)})" '
            f'fill="{fill}" fill-opacity="{_f(opacity)}" stroke="{stroke}"{dash}/>')

    def add_circle(self, c: SecurityCircle, stroke: str) -> None:
        self._body.append(
            f'<circle cx="{_f(self._x(c.center.x))}" cy="{_f(self._y(c.center.y))}" '
            f'r="{_f(c.radius * self.scale)}" fill="none" stroke="{stroke}" '
            f'stroke-dasharray="2,3"/>')

    def add_polyline(self, points: Sequence[Point2], stroke: str,
                     width: float = 1.5, dashed: bool = False,
                     css_class: Optional[str] = None) -> None:
        if len(points) < 2:
            return
        pts = " ".join(f"{_f(self._x(p.x))},{_f(self._y(p.y))}" for p in points)
        dash = ' stroke-dasharray="8,6"' if dashed else ""
        cls = f' class="{css_class}"' if css_class else ""
        self._body.append(
            f'<polyline{cls} points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_f(width)}"{dash}/>')

    def add_marker(self, p: Point2, color: str, radius: float = 4.0) -> None:
        self._body.append(
            f'<circle cx="{_f(self._x(p.x))}" cy="{_f(self._y(p.y))}" '
            f'r="{_f(radius)}" fill="{color}" stroke="none"/>')

    def add_graph(self, g: GeoGraph, edge_color: str = "#bbbbbb",
                  vertex_color: str = "#555555") -> None:
        for i, j, _ in g.edges:
            a, b = g.vertices[i], g.vertices[j]
            self._body.append(
                f'<line x1="{_f(self._x(a.x))}" y1="{_f(self._y(a.y))}" '
                f'x2="{_f(self._x(b.x))}" y2="{_f(self._y(b.y))}" '
                f'stroke="{edge_color}" stroke-width="0.5"/>')
        for v in g.vertices:
            self.add_marker(v, vertex_color, radius=1.5)

    def add_field_glyphs(self, glyphs: Sequence[tuple[float, float, float]],
                         spacing: float, color: str = "#888888") -> None:
        """Direction glyphs as short lines; the world-frame angle rides along
        in a data-angle attribute so consumers can re-check the field."""
        length = GLYPH_LEN_FRACTION * spacing * self.scale
        self._body.append('<g class="field">')
        for x, y, angle in glyphs:
            x1, y1 = self._x(x), self._y(y)
            x2 = x1 + length * math.cos(angle)
            y2 = y1 - length * math.sin(angle)
            self._body.append(
                f'<line data-angle="{angle:.6f}" x1="{_f(x1)}" y1="{_f(y1)}" '
                f'x2="{_f(x2)}" y2="{_f(y2)}" stroke="{color}" stroke-width="1"/>')
            self._body.append(
                f'<circle cx="{_f(x2)}" cy="{_f(y2)}" r="1.2" fill="{color}"/>')
        self._body.append("</g>")

    def add_trajectory(self, samples: Sequence[tuple[float, float, str]]) -> None:
        """Trajectory split into one polyline per contiguous mode stretch."""
        if not samples:
            return
        start = 0
        for k in range(1, len(samples) + 1):
            if k == len(samples) or samples[k][2] != samples[start][2]:
                chunk = samples[start:k + 1] if k < len(samples) else samples[start:k]
                mode = samples[start][2]
                pts = [Point2(s[0], s[1]) for s in chunk]
                self.add_polyline(pts, MODE_COLORS.get(mode, "#000000"),
                                  width=2.0, css_class=f"mode-{mode}")
                start = k

    def document(self) -> str:
        side = _f(self.width_px)
        head = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{side}" height="{side}" viewBox="0 0 {side} {side}">',
            f'<rect x="0" y="0" width="{side}" height="{side}" fill="#fbfbf8"/>',
        ]
        return "\n".join(head + self._body + ["</svg>"]) + "\n"
