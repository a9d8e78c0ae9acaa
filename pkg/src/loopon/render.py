"""Deterministic SVG snapshots of loop configurations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .lattice import Hex, edge_endpoints, hex_color, hexagon_edges, hexagon_vertices
from .loopcfg import LoopConfig

SQRT3 = math.sqrt(3.0)
SHADES = ("#9fd89f", "#f2a3a3", "#a3b8f2")


@dataclass(frozen=True)
class RenderStyle:
    radius: float = 12.0          # pixels per hexagon circumradius
    stroke: float = 3.0
    grid_stroke: float = 0.6
    margin: float = 10.0
    shade: tuple = (False, False, False)

    def __post_init__(self):
        if self.radius <= 0 or self.stroke <= 0 or self.margin < 0:
            raise ValueError("render dimensions must be positive")


def _hex_center(z: Hex) -> tuple[float, float]:
    return z[0] * SQRT3, z[0] + 2.0 * z[1]


def _vertex_pos(v) -> tuple[float, float]:
    xs, ys = zip(*(_hex_center(z) for z in v))
    return sum(xs) / 3.0, sum(ys) / 3.0


def render_svg(omega: LoopConfig, window: Iterable[Hex], style: RenderStyle = RenderStyle()) -> str:
    window = sorted(set(window))
    scale = style.radius * SQRT3 / 2.0   # hexagon centres are 2 units apart
    pts = [_vertex_pos(v) for z in window for v in hexagon_vertices(z)]
    x0 = min(p[0] for p in pts)
    x1 = max(p[0] for p in pts)
    y0 = min(p[1] for p in pts)
    y1 = max(p[1] for p in pts)
    m = style.margin

    def tx(p):
        # flip y so that larger b is drawn higher
        return f"{(p[0] - x0) * scale + m:.2f}", f"{(y1 - p[1]) * scale + m:.2f}"

    width = (x1 - x0) * scale + 2 * m
    height = (y1 - y0) * scale + 2 * m
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2f}" height="{height:.2f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
        f'<rect width="{width:.2f}" height="{height:.2f}" fill="#ffffff"/>',
    ]
    edges = omega.edges
    for z in window:
        poly = " ".join(",".join(tx(_vertex_pos(v))) for v in hexagon_vertices(z))
        c = hex_color(z)
        flower = all(e in edges for e in hexagon_edges(z))
        fill = SHADES[c] if (style.shade[c] and flower) else "none"
        out.append(f'<polygon points="{poly}" fill="{fill}" stroke="#c8c8c8" '
                   f'stroke-width="{style.grid_stroke:.2f}"/>')
    inside = set(window)
    for e in sorted(edges):
        if e[0] not in inside and e[1] not in inside:
            continue
        a, b = edge_endpoints(e)
        (ax, ay), (bx, by) = tx(_vertex_pos(a)), tx(_vertex_pos(b))
        out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="#000000" '
                   f'stroke-width="{style.stroke:.2f}" stroke-linecap="round"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
