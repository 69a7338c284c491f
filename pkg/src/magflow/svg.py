"""Static SVG pictures of the disk, the octagon and orbits.

The unit disk fills a 1000 x 1000 viewBox with the y axis flipped, so a
clockwise orbit in the disk is drawn clockwise on screen.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

from .curves import EuclideanCircle

SIZE = 1000
HALF = SIZE / 2


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def to_screen(z: complex) -> tuple[float, float]:
    return HALF * (1.0 + z.real), HALF * (1.0 - z.imag)


def _root() -> ET.Element:
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", version="1.1",
                     width=str(SIZE), height=str(SIZE), viewBox=f"0 0 {SIZE} {SIZE}")
    defs = ET.SubElement(svg, "defs")
    clip = ET.SubElement(defs, "clipPath", id="disk")
    # the clip circle is the boundary itself, never strictly inside it
    ET.SubElement(clip, "circle", cx=_fmt(HALF), cy=_fmt(HALF), r=_fmt(HALF))
    ET.SubElement(svg, "circle", cx=_fmt(HALF), cy=_fmt(HALF), r=_fmt(HALF),
                  fill="#f8f8f8", stroke="black", **{"stroke-width": "2"})
    return svg


def _path_d(points, breaks=()) -> str:
    parts = []
    breaks = set(breaks)
    for i, z in enumerate(points):
        x, y = to_screen(complex(z))
        cmd = "M" if i == 0 or i in breaks else "L"
        parts.append(f"{cmd}{_fmt(x)} {_fmt(y)}")
    return " ".join(parts)


def add_polygon(svg: ET.Element, sides, colour: str = "#3465a4"):
    """``sides`` is a list of point sequences, one per geodesic side."""
    g = ET.SubElement(svg, "g", fill="none", stroke=colour, **{"stroke-width": "1.5"})
    for pts in sides:
        ET.SubElement(g, "path", d=_path_d(pts))


def add_polyline(svg: ET.Element, points, breaks=(), colour: str = "#cc0000"):
    ET.SubElement(svg, "path", d=_path_d(points, breaks), fill="none", stroke=colour,
                  **{"stroke-width": "1", "clip-path": "url(#disk)"})


def add_curve(svg: ET.Element, curve: EuclideanCircle, colour: str = "#4e9a06"):
    """Exact orbit circle (clipped to the disk) or diameter."""
    attrs = {"fill": "none", "stroke": colour, "stroke-width": "1.5",
             "clip-path": "url(#disk)"}
    if curve.center is None:
        d = curve.line_direction
        ET.SubElement(svg, "path", d=_path_d([-d, d]), **attrs)
        return
    cx, cy = to_screen(curve.center)
    ET.SubElement(svg, "circle", cx=_fmt(cx), cy=_fmt(cy), r=_fmt(HALF * curve.radius), **attrs)


def octagon_sides(group, samples: int = 24) -> list:
    from .fuchsian import geodesic_point

    dom = group.domain
    return [[geodesic_point(*dom.side(k), t) for t in np.linspace(0.0, 1.0, samples)]
            for k in range(8)]


def render(*, group=None, curves=(), polylines=()) -> str:
    """SVG text; ``polylines`` holds ``(points, breaks)`` pairs."""
    svg = _root()
    if group is not None:
        add_polygon(svg, octagon_sides(group))
    for c in curves:
        add_curve(svg, c)
    for pts, breaks in polylines:
        add_polyline(svg, pts, breaks)
    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode") + "\n"
