"""Shapes, gauges, and distances.

Facilities are translatable convex-ish shapes rooted at a local origin.  This
script pokes at the geometric primitives: the Minkowski gauge (0 at the root,
1 on the boundary), norm distances, and the l1 separation between two placed
shapes that the construction heuristic relies on.
"""

from dimfac.geometry import (
    Ellipse,
    Norm,
    Point,
    Polygon,
    gauge_value,
    max_vertex_distance,
    min_l1_shape_distance,
    norm_distance,
    translate,
)

square = Polygon((Point(-0.5, -0.5), Point(0.5, -0.5), Point(0.5, 0.5), Point(-0.5, 0.5)))
ellipse = Ellipse(0.6, 0.35)

print("gauge along the ray (1, 0.4), square vs ellipse:")
for t in (0.25, 0.5, 1.0, 2.0):
    v = Point(t * 1.0, t * 0.4)
    print(f"  t={t:<4}  square {gauge_value(square, v):.4f}   ellipse {gauge_value(ellipse, v):.4f}")
print("doubling t doubles the gauge; crossing 1 means leaving the shape\n")

corner = Point(0.5, 0.5)
print(f"gauge at a square corner: {gauge_value(square, corner)} (boundary => 1)")

q = Point(1.5, 0.75)
for norm in (Norm.l1(), Norm.l2(), Norm.linf(), Norm.weighted_l2(1.0, 2.0)):
    print(f"  |q| under {norm.kind:<12} = {norm_distance(Point(0, 0), q, norm):.4f}")

# the farthest-vertex distance is what "max_distance" utilities use
placed = translate(square, Point(2.0, 0.0))
print(f"\nfarthest vertex of the square placed at (2,0) from q={tuple(q)}:",
      f"{max_vertex_distance(q, placed, Norm.l2()):.4f}")

# separation between placed shapes, used by the wavefront margin test
a = translate(square, Point(0.0, 0.0))
for dx in (2.0, 1.2, 1.0, 0.8):
    b = translate(square, Point(dx, 0.0))
    print(f"l1 gap between unit squares {dx} apart: {min_l1_shape_distance(a, b):.3f}")
