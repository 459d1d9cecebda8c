"""Standalone SVG drawings of chains, triangle decompositions and packings."""

from __future__ import annotations

import math
from fractions import Fraction
from xml.sax.saxutils import escape

from .arith import format_number
from .toric import AffineLatticeMap, EdgeChain, LatticeTriangle, packing_triangles

VIEW = 1000
MARGIN = 60
MAX_GRID_LINES = 120
MAX_LATTICE_POINTS = 4000

_FILLS = ("#cfe3f5", "#f6d7b0", "#d4ecc6", "#ead1ef", "#f4f1b5", "#f5c6c6")


def _shapes(obj):
    """Split the input into (triangles, edges)."""
    if isinstance(obj, EdgeChain):
        return [], list(obj.edges)
    items = list(obj or [])
    if not items:
        return [], []
    if all(isinstance(x, AffineLatticeMap) for x in items):
        return packing_triangles(items), []
    if all(isinstance(x, LatticeTriangle) for x in items):
        return items, []
    raise TypeError("expected an EdgeChain, triangles, or lattice maps")


def render_svg(obj, title: str | None = None) -> str:
    triangles, edges = _shapes(obj)
    pts = [p for t in triangles for p in t.vertices]
    pts += [p for e in edges for p in (e.start, e.end)]
    xs = [Fraction(0), Fraction(1)] + [Fraction(p[0]) for p in pts]
    ys = [Fraction(0), Fraction(1)] + [Fraction(p[1]) for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0)
    scale = Fraction(VIEW - 2 * MARGIN) / span

    def sx(x):
        return float((Fraction(x) - x0) * scale) + MARGIN

    def sy(y):
        # SVG y grows downward
        return VIEW - MARGIN - float((Fraction(y) - y0) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {VIEW} {VIEW}" width="{VIEW}" height="{VIEW}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<rect x="0" y="0" width="100%" height="100%" fill="white"/>')

    # lattice grid
    lo_x, hi_x = math.floor(x0), math.ceil(x1)
    lo_y, hi_y = math.floor(y0), math.ceil(y1)
    step = max(1, math.ceil(max(hi_x - lo_x, hi_y - lo_y) / MAX_GRID_LINES))
    out.append('<g stroke="#e4e4e4" stroke-width="1">')
    for gx in range(lo_x, hi_x + 1, step):
        out.append(f'<line x1="{sx(gx):.2f}" y1="{sy(lo_y):.2f}" x2="{sx(gx):.2f}" y2="{sy(hi_y):.2f}"/>')
    for gy in range(lo_y, hi_y + 1, step):
        out.append(f'<line x1="{sx(lo_x):.2f}" y1="{sy(gy):.2f}" x2="{sx(hi_x):.2f}" y2="{sy(gy):.2f}"/>')
    out.append("</g>")

    # axes
    out.append('<g stroke="black" stroke-width="2">')
    out.append(f'<line x1="{sx(0):.2f}" y1="{sy(0):.2f}" x2="{sx(hi_x):.2f}" y2="{sy(0):.2f}"/>')
    out.append(f'<line x1="{sx(0):.2f}" y1="{sy(0):.2f}" x2="{sx(0):.2f}" y2="{sy(hi_y):.2f}"/>')
    out.append("</g>")

    for i, tri in enumerate(triangles):
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in tri.vertices)
        out.append(f'<polygon points="{coords}" fill="{_FILLS[i % len(_FILLS)]}" '
                   f'stroke="#333" stroke-width="2"/>')
        cx = sum(Fraction(p[0]) for p in tri.vertices) / 3
        cy = sum(Fraction(p[1]) for p in tri.vertices) / 3
        out.append(f'<text x="{sx(cx):.2f}" y="{sy(cy):.2f}" font-size="24" '
                   f'text-anchor="middle" dominant-baseline="middle">{format_number(tri.size)}</text>')

    for e in edges:
        coords = f"{sx(e.start[0]):.2f},{sy(e.start[1]):.2f} {sx(e.end[0]):.2f},{sy(e.end[1]):.2f}"
        out.append(f'<polygon points="{coords}" fill="none" stroke="#b03030" stroke-width="4">'
                   f"<title>eps{e.index} conormal=({e.conormal[0]},{e.conormal[1]}) "
                   f"{escape(str(e.hclass))}</title></polygon>")

    n_pts = (hi_x - lo_x + 1) * (hi_y - lo_y + 1)
    if n_pts <= MAX_LATTICE_POINTS:
        out.append('<g fill="#555">')
        for gx in range(lo_x, hi_x + 1):
            for gy in range(lo_y, hi_y + 1):
                out.append(f'<circle cx="{sx(gx):.2f}" cy="{sy(gy):.2f}" r="3"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def polygon_count(svg: str) -> int:
    return svg.count("<polygon ")
