"""Deterministic SVG rendering of a solved placement.

The output contains no timestamps or random ids and formats every number
with six decimals, so the same solution always serializes to the same
bytes.  Working cells are filled with the color of the facility that
serves them; cells inside a footprint get a hatch overlay.
"""

from __future__ import annotations

from .costs import PiecewiseLinear
from .evaluate import Facility, objective
from .geometry import Ellipse, PlacedShape, world_vertices
from .grid import DiscretizedInstance, Placement

__all__ = ["PALETTE", "render_solution"]

PALETTE = (
    "#4c78a8",
    "#f58518",
    "#54a24b",
    "#e45756",
    "#72b7b2",
    "#b279a2",
    "#ff9da6",
    "#9d755d",
    "#bab0ac",
    "#d67195",
)

_MARGIN = 20.0
_PLOT_W = 640.0
_LEGEND_W = 300.0
_LINE_H = 22.0


def _f(v: float) -> str:
    return f"{v:.6f}"


def render_solution(
    di: DiscretizedInstance,
    facs: tuple[Facility, ...],
    lost_cost: PiecewiseLinear,
    placement: Placement,
    show_grid: bool = False,
) -> str:
    bbox = di.grid.bbox
    scale = _PLOT_W / bbox.width
    plot_h = bbox.height * scale
    legend_lines = 4 + len(facs)
    height = max(plot_h, legend_lines * _LINE_H) + 2 * _MARGIN
    width = _PLOT_W + _LEGEND_W + 2 * _MARGIN

    def sx(x: float) -> float:
        return _MARGIN + (x - bbox.x_lo) * scale

    def sy(y: float) -> float:
        return _MARGIN + (bbox.y_hi - y) * scale

    evaluation = objective(di, facs, lost_cost, placement)
    alloc = evaluation.allocation

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    out.append("<defs>")
    out.append(
        '<pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse">'
        '<path d="M 0 6 L 6 0" stroke="#333333" stroke-width="1.2" fill="none"/>'
        "</pattern>"
    )
    out.append("</defs>")
    out.append(f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>')

    # working cells, row-major
    for cell in di.cells:
        r = di.grid.cell_rect(cell)
        x, y = sx(r.x_lo), sy(r.y_hi)
        w, h = r.width * scale, r.height * scale
        covered = cell in alloc.covered_by
        owner = alloc.covered_by[cell] if covered else alloc.assigned_to[cell]
        color = PALETTE[owner % len(PALETTE)]
        opacity = "0.9" if covered else "0.45"
        out.append(
            f'<rect class="cell" x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="{color}" fill-opacity="{opacity}" stroke="none"/>'
        )
        if covered:
            out.append(
                f'<rect class="hatch" x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
                f'fill="url(#hatch)" stroke="none"/>'
            )

    if show_grid:
        out.append('<g class="grid" stroke="#999999" stroke-width="0.5">')
        for k in range(di.grid.nx + 1):
            x = sx(bbox.x_lo + k * di.grid.hx)
            out.append(f'<line x1="{_f(x)}" y1="{_f(sy(bbox.y_hi))}" x2="{_f(x)}" y2="{_f(sy(bbox.y_lo))}"/>')
        for l in range(di.grid.ny + 1):
            y = sy(bbox.y_lo + l * di.grid.hy)
            out.append(f'<line x1="{_f(sx(bbox.x_lo))}" y1="{_f(y)}" x2="{_f(sx(bbox.x_hi))}" y2="{_f(y)}"/>')
        out.append("</g>")

    # region outline
    pts = " L ".join(f"{_f(sx(p.x))} {_f(sy(p.y))}" for p in di.region.vertices)
    out.append(
        f'<path class="region" d="M {pts} Z" fill="none" stroke="#000000" stroke-width="1.5"/>'
    )

    # facility outlines at their placed roots
    for i, at in enumerate(placement):
        root = di.grid.cell_center(tuple(at))
        placed = PlacedShape(di.shapes[i], root)
        color = PALETTE[i % len(PALETTE)]
        if isinstance(di.shapes[i], Ellipse):
            a, b = di.shapes[i].a * scale, di.shapes[i].b * scale
            cx, cy = sx(root.x), sy(root.y)
            d = (
                f"M {_f(cx - a)} {_f(cy)} "
                f"A {_f(a)} {_f(b)} 0 1 0 {_f(cx + a)} {_f(cy)} "
                f"A {_f(a)} {_f(b)} 0 1 0 {_f(cx - a)} {_f(cy)} Z"
            )
        else:
            verts = world_vertices(placed)
            d = "M " + " L ".join(f"{_f(sx(p.x))} {_f(sy(p.y))}" for p in verts) + " Z"
        out.append(
            f'<path class="facility" d="{d}" fill="#ffffff" fill-opacity="0.25" '
            f'stroke="{color}" stroke-width="2.0"/>'
        )

    # legend
    lx = _MARGIN + _PLOT_W + 24.0
    ly = _MARGIN + 10.0
    out.append(f'<g class="legend" font-family="monospace" font-size="13">')
    out.append(f'<text x="{_f(lx)}" y="{_f(ly)}">placement summary</text>')
    for i, fac in enumerate(facs):
        y = ly + (i + 1) * _LINE_H
        color = PALETTE[i % len(PALETTE)]
        label = fac.name if fac.name else f"facility {i}"
        out.append(
            f'<rect x="{_f(lx)}" y="{_f(y - 11.0)}" width="14" height="14" '
            f'fill="{color}" fill-opacity="0.9"/>'
        )
        out.append(
            f'<text x="{_f(lx + 20.0)}" y="{_f(y)}">{_esc(label)} '
            f"served {_f(alloc.assigned_mass[i])} "
            f"covered {_f(alloc.install_mass[i])}</text>"
        )
    y = ly + (len(facs) + 1) * _LINE_H
    out.append(f'<text x="{_f(lx)}" y="{_f(y)}">lost demand {_f(alloc.lost_mass)}</text>')
    y += _LINE_H
    out.append(f'<text x="{_f(lx)}" y="{_f(y)}">total cost {_f(evaluation.total)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
