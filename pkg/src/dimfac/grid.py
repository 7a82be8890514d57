"""Discretization of the region: cells, quadrature weights, feasible placements,
footprints, and the suitability test for whole placements.

Cell (k, l) of an nx-by-ny grid over the bounding box covers
[x_lo + k*hx, x_lo + (k+1)*hx) x [y_lo + l*hy, y_lo + (l+1)*hy); the topmost
row/column closes its outer boundary.  The working cell set keeps every cell
whose open interior meets the region, ordered row-major (sorted (k, l)
tuples), and all derived tables follow that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import expr as ex
from .geometry import (
    Ellipse,
    Point,
    Polygon,
    Rect,
    Shape,
    interior_intersects_rect,
    local_bounds,
    polygon_rect_overlap_area,
    shape_inside_polygon,
    translate,
)

Cell = tuple[int, int]


@dataclass(frozen=True)
class Grid:
    bbox: Rect
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"grid needs at least one cell per axis, got {self.nx}x{self.ny}")

    @property
    def hx(self) -> float:
        return self.bbox.width / self.nx

    @property
    def hy(self) -> float:
        return self.bbox.height / self.ny

    def cell_rect(self, cell: Cell) -> Rect:
        k, l = cell
        if not (0 <= k < self.nx and 0 <= l < self.ny):
            raise ValueError(f"cell {cell} outside {self.nx}x{self.ny} grid")
        return Rect(
            self.bbox.x_lo + k * self.hx,
            self.bbox.y_lo + l * self.hy,
            self.bbox.x_lo + (k + 1) * self.hx,
            self.bbox.y_lo + (l + 1) * self.hy,
        )

    def cell_center(self, cell: Cell) -> Point:
        k, l = cell
        return Point(
            self.bbox.x_lo + (k + 0.5) * self.hx,
            self.bbox.y_lo + (l + 0.5) * self.hy,
        )

    def cell_of(self, q: Point) -> Cell:
        """Cell containing q under the half-open convention, clamped to the grid."""
        k = math.floor((q.x - self.bbox.x_lo) / self.hx)
        l = math.floor((q.y - self.bbox.y_lo) / self.hy)
        return (min(max(k, 0), self.nx - 1), min(max(l, 0), self.ny - 1))


def build_cells(region: Polygon, grid: Grid, eps: float = 1e-9) -> tuple[Cell, ...]:
    """Cells whose open interior meets the region, row-major order."""
    diag = math.hypot(grid.hx, grid.hy)
    out = []
    for k in range(grid.nx):
        for l in range(grid.ny):
            area = polygon_rect_overlap_area(region.vertices, grid.cell_rect((k, l)))
            if area > eps * diag:
                out.append((k, l))
    return tuple(sorted(out))


@lru_cache(maxsize=32)
def _gauss_nodes(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if order < 1:
        raise ValueError("quadrature order must be positive")
    x, w = leggauss(order)
    return tuple(float(v) for v in x), tuple(float(v) for v in w)


def cell_weight(grid: Grid, cell: Cell, density: ex.Expr, order: int = 4) -> float:
    """Integral of the density over the closed cell by tensor Gauss-Legendre."""
    rect = grid.cell_rect(cell)
    nodes, weights = _gauss_nodes(order)
    jac = 0.25 * rect.width * rect.height
    total = 0.0
    env = {"x": 0.0, "y": 0.0}
    for xi, wx in zip(nodes, weights):
        env["x"] = rect.x_lo + 0.5 * (xi + 1.0) * rect.width
        for yi, wy in zip(nodes, weights):
            env["y"] = rect.y_lo + 0.5 * (yi + 1.0) * rect.height
            try:
                total += wx * wy * ex.evaluate(density, env)
            except ex.ExprDomainError as e:
                raise ex.ExprDomainError(
                    f"density failed at quadrature node ({env['x']}, {env['y']}) of cell {cell}: {e}"
                ) from e
    return jac * total


def facility_feasible_cells(
    region: Polygon, grid: Grid, cells: tuple[Cell, ...], shape: Shape, eps: float = 1e-9
) -> tuple[Cell, ...]:
    """Placement cells: shape translated to the cell center stays inside the region."""
    return tuple(
        c for c in cells if shape_inside_polygon(translate(shape, grid.cell_center(c)), region, eps)
    )


@lru_cache(maxsize=256)
def _footprint_stencil(hx: float, hy: float, shape: Shape, eps: float) -> frozenset[Cell]:
    """Cell offsets whose open box overlaps the shape interior when the shape
    sits at a cell center.  Offsets are translation-covariant on a uniform
    grid, so one stencil serves every placement of the shape."""
    xmin, ymin, xmax, ymax = local_bounds(shape)
    placed = translate(shape, Point(0.0, 0.0))
    lo_k = math.floor(xmin / hx - 0.5) - 1
    hi_k = math.ceil(xmax / hx + 0.5) + 1
    lo_l = math.floor(ymin / hy - 0.5) - 1
    hi_l = math.ceil(ymax / hy + 0.5) + 1
    offsets = set()
    for dk in range(lo_k, hi_k + 1):
        for dl in range(lo_l, hi_l + 1):
            box = Rect((dk - 0.5) * hx, (dl - 0.5) * hy, (dk + 0.5) * hx, (dl + 0.5) * hy)
            if interior_intersects_rect(placed, box, eps):
                offsets.add((dk, dl))
    return frozenset(offsets)


def facility_footprint(
    grid: Grid, cells: tuple[Cell, ...] | frozenset[Cell], shape: Shape, at: Cell, eps: float = 1e-9
) -> frozenset[Cell]:
    """Working cells whose open interior meets the open interior of the shape
    placed at the center of ``at``."""
    cell_set = cells if isinstance(cells, frozenset) else frozenset(cells)
    k, l = at
    stencil = _footprint_stencil(grid.hx, grid.hy, shape, eps)
    return frozenset(
        (k + dk, l + dl) for dk, dl in stencil if (k + dk, l + dl) in cell_set
    )


@dataclass(frozen=True, eq=False)
class DiscretizedInstance:
    """Immutable result of discretizing a region with a list of facility shapes.

    ``cells`` is the working cell set in row-major order; weights and
    footprint mass sums follow that order.  ``feasible[i]`` lists the
    placement cells of shape i; ``footprints[i][at]`` is its footprint there.
    """

    region: Polygon
    grid: Grid
    shapes: tuple[Shape, ...]
    eps: float
    quad_order: int
    cells: tuple[Cell, ...]
    cell_pos: dict[Cell, int] = field(repr=False)
    demand_weight: dict[Cell, float] = field(repr=False)
    install_weight: dict[Cell, float] = field(repr=False)
    feasible: tuple[tuple[Cell, ...], ...] = field(repr=False)
    feasible_sets: tuple[frozenset[Cell], ...] = field(repr=False)
    footprints: tuple[dict[Cell, frozenset[Cell]], ...] = field(repr=False)
    fp_demand_sum: tuple[dict[Cell, float], ...] = field(repr=False)
    fp_install_sum: tuple[dict[Cell, float], ...] = field(repr=False)
    wd_array: np.ndarray = field(repr=False)
    wb_array: np.ndarray = field(repr=False)

    @property
    def n_facilities(self) -> int:
        return len(self.shapes)

    def centers(self) -> tuple[Point, ...]:
        return tuple(self.grid.cell_center(c) for c in self.cells)

    def total_demand(self) -> float:
        return float(np.sum(self.wd_array))

    def in_feasible_region(self, i: int, q: Point) -> bool:
        """Is q inside the union of facility i's feasible placement cells?

        cell_of clamps out-of-grid points to edge cells, so check bbox
        membership first or everything beyond the grid would pass.
        """
        if not self.grid.bbox.contains(q):
            return False
        return self.grid.cell_of(q) in self.feasible_sets[i]


def discretize(
    region: Polygon,
    grid: Grid,
    shapes: tuple[Shape, ...] | list[Shape],
    demand_density: ex.Expr,
    install_density: ex.Expr,
    quad_order: int = 4,
    eps: float = 1e-9,
) -> DiscretizedInstance:
    shapes = tuple(shapes)
    cells = build_cells(region, grid, eps)
    if not cells:
        raise ValueError("no working cells: the grid does not meet the region")
    cell_pos = {c: i for i, c in enumerate(cells)}
    wd = {c: cell_weight(grid, c, demand_density, quad_order) for c in cells}
    wb = {c: cell_weight(grid, c, install_density, quad_order) for c in cells}
    feasible = []
    feasible_sets = []
    footprints = []
    fp_wd = []
    fp_wb = []
    cell_set = frozenset(cells)
    for shape in shapes:
        feas = facility_feasible_cells(region, grid, cells, shape, eps)
        fps = {at: facility_footprint(grid, cell_set, shape, at, eps) for at in feas}
        feasible.append(feas)
        feasible_sets.append(frozenset(feas))
        footprints.append(fps)
        fp_wd.append({at: sum(wd[c] for c in sorted(fp)) for at, fp in fps.items()})
        fp_wb.append({at: sum(wb[c] for c in sorted(fp)) for at, fp in fps.items()})
    return DiscretizedInstance(
        region=region,
        grid=grid,
        shapes=shapes,
        eps=eps,
        quad_order=quad_order,
        cells=cells,
        cell_pos=cell_pos,
        demand_weight=wd,
        install_weight=wb,
        feasible=tuple(feasible),
        feasible_sets=tuple(feasible_sets),
        footprints=tuple(footprints),
        fp_demand_sum=tuple(fp_wd),
        fp_install_sum=tuple(fp_wb),
        wd_array=np.array([wd[c] for c in cells]),
        wb_array=np.array([wb[c] for c in cells]),
    )


Placement = tuple[Cell, ...]


def placement_violation(di: DiscretizedInstance, placement: Placement) -> str | None:
    """None when the placement is suitable, else a human-readable reason."""
    if len(placement) != di.n_facilities:
        raise ValueError(
            f"placement has {len(placement)} entries for {di.n_facilities} facilities"
        )
    for i, at in enumerate(placement):
        if tuple(at) not in di.feasible_sets[i]:
            return f"facility {i} at cell {tuple(at)} is outside its feasible placement set"
    for i in range(len(placement)):
        fp_i = di.footprints[i][tuple(placement[i])]
        for j in range(i + 1, len(placement)):
            if not fp_i.isdisjoint(di.footprints[j][tuple(placement[j])]):
                overlap = sorted(fp_i & di.footprints[j][tuple(placement[j])])
                return (
                    f"footprints of facilities {i} and {j} overlap on cells {overlap[:4]}"
                    + ("..." if len(overlap) > 4 else "")
                )
    return None


def placement_is_suitable(di: DiscretizedInstance, placement: Placement) -> bool:
    return placement_violation(di, placement) is None


def l1_project_to_cells(
    grid: Grid, cells: tuple[Cell, ...] | frozenset[Cell], q: Point
) -> Point:
    """Nearest point of the union of closed cells under the l1 distance.

    Per-cell projection is coordinate clamping; ties go to the first cell in
    row-major order.
    """
    best_d = math.inf
    best: Point | None = None
    for c in sorted(cells):
        p = grid.cell_rect(c).clamp(q)
        d = abs(p.x - q.x) + abs(p.y - q.y)
        if d < best_d:
            best_d, best = d, p
            if d == 0.0:
                break
    if best is None:
        raise ValueError("empty cell set")
    return best
