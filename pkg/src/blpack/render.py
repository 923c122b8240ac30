"""Deterministic SVG rendering of packings."""

from __future__ import annotations

from .jsonio import write_text
from .solver import Packing, observed_branch


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def render_svg_text(p: Packing) -> str:
    """Unit circle plus all packing circles; branch circles filled black."""
    branch_verts = set(observed_branch(p).vertices())
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.05 -1.05 2.1 2.1"'
        ' width="640" height="640">',
        '<g transform="scale(1,-1)">',
        '<circle cx="0" cy="0" r="1" fill="none" stroke="#000"'
        ' stroke-width="0.005"/>',
    ]
    for v, c in enumerate(p.circles):
        fill = "#000" if v in branch_verts else "none"
        lines.append(
            f'<circle cx="{_fmt(c.center.real)}" cy="{_fmt(c.center.imag)}"'
            f' r="{_fmt(c.radius)}" fill="{fill}" stroke="#000"'
            ' stroke-width="0.003"/>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(p: Packing, path: str) -> None:
    write_text(path, render_svg_text(p))
