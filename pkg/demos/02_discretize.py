"""Discretizing a region into working cells.

An L-shaped region is overlaid with a bounding-box grid.  Cells that meet the
region become working cells carrying demand/installation masses from tensor
Gauss-Legendre quadrature over the clipped area.  Each facility also gets a
feasible placement set (cells whose center keeps the shape inside the region)
and per-cell footprints (cells the placed shape overlaps).
"""

from dimfac import expr
from dimfac.geometry import Point, Polygon, Rect, RegionPolygon
from dimfac.grid import Grid, discretize

# unit square with the top-right quarter removed
region = RegionPolygon((
    Point(0, 0), Point(1, 0), Point(1, 0.5),
    Point(0.5, 0.5), Point(0.5, 1), Point(0, 1),
))
grid = Grid(Rect(0, 0, 1, 1), 10, 10)
shape = Polygon((Point(-0.08, -0.06), Point(0.08, -0.06), Point(0.08, 0.06), Point(-0.08, 0.06)))

di = discretize(
    region, grid, (shape,),
    expr.parse("1 + x + y", {"x", "y"}),
    expr.parse("1", {"x", "y"}),
)

print(f"{len(di.cells)} working cells of {grid.nx * grid.ny} grid cells")
print(f"demand mass  {di.wd_array.sum():.6f}  (integral of 1+x+y over the L)")
print(f"feasible placements for the 0.16 x 0.12 box: {len(di.feasible[0])}")

def ascii_map(marked, legend):
    print(legend)
    for l in reversed(range(grid.ny)):
        row = ""
        for k in range(grid.nx):
            c = (k, l)
            row += marked(c)
        print("  " + row)

ascii_map(
    lambda c: "#" if c in di.feasible_sets[0] else ("." if c in di.cell_pos else " "),
    "feasible placement cells (#) inside the working region (.):",
)

at = (2, 2)
fp = di.footprints[0][at]
ascii_map(
    lambda c: "o" if c == at else ("X" if c in fp else ("." if c in di.cell_pos else " ")),
    f"\nfootprint of a placement at {at} (o = placement cell, X = also overlapped):",
)
print(f"footprint demand mass: {di.fp_demand_sum[0][at]:.6f}")
