"""Planar geometry for dimensional facilities: shapes, norms, gauges, containment.

Shapes are defined in local coordinates with the root point at the local
origin; a PlacedShape pairs a shape with a world-frame root.  Polygons are
simple, counter-clockwise, and must contain the origin (inside or on the
boundary).  Ellipses are axis-aligned with semi-axes ``a`` and ``b``.

All closed-set predicates treat grazing contact (within ``eps``) as
containment; the open-interior overlap test treats grazing as disjoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Union


class GeometryError(Exception):
    """Base class for geometry errors."""


class InvalidShapeError(GeometryError):
    """Shape fails a structural invariant (orientation, simplicity, origin)."""


class UnsupportedShapeError(GeometryError):
    """Operation not defined for this shape kind."""


class GaugeDomainError(GeometryError):
    """Gauge undefined: root point not strictly interior to the shape."""


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Norm:
    """A norm on the plane.  kind: l1 | l2 | linf | weighted_l2."""

    kind: str
    wx: float = 1.0
    wy: float = 1.0

    def __post_init__(self):
        if self.kind not in ("l1", "l2", "linf", "weighted_l2"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if not (self.wx > 0.0 and self.wy > 0.0):
            raise ValueError("norm weights must be positive")

    @classmethod
    def l1(cls) -> "Norm":
        return cls("l1")

    @classmethod
    def l2(cls) -> "Norm":
        return cls("l2")

    @classmethod
    def linf(cls) -> "Norm":
        return cls("linf")

    @classmethod
    def weighted_l2(cls, wx: float, wy: float) -> "Norm":
        return cls("weighted_l2", wx, wy)


def norm_value(v: Point, norm: Norm) -> float:
    if norm.kind == "l2":
        return math.hypot(v.x, v.y)
    if norm.kind == "l1":
        return abs(v.x) + abs(v.y)
    if norm.kind == "linf":
        return max(abs(v.x), abs(v.y))
    return math.hypot(norm.wx * v.x, norm.wy * v.y)


def norm_distance(a: Point, b: Point, norm: Norm) -> float:
    return norm_value(Point(a.x - b.x, a.y - b.y), norm)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle with positive area."""

    x_lo: float
    y_lo: float
    x_hi: float
    y_hi: float

    def __post_init__(self):
        if not (self.x_hi > self.x_lo and self.y_hi > self.y_lo):
            raise ValueError(f"degenerate rect {self}")

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> float:
        return self.y_hi - self.y_lo

    def center(self) -> Point:
        return Point(0.5 * (self.x_lo + self.x_hi), 0.5 * (self.y_lo + self.y_hi))

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (
            Point(self.x_lo, self.y_lo),
            Point(self.x_hi, self.y_lo),
            Point(self.x_hi, self.y_hi),
            Point(self.x_lo, self.y_hi),
        )

    def clamp(self, q: Point) -> Point:
        return Point(
            min(max(q.x, self.x_lo), self.x_hi),
            min(max(q.y, self.y_lo), self.y_hi),
        )

    def contains(self, q: Point, eps: float = 0.0) -> bool:
        return (
            self.x_lo - eps <= q.x <= self.x_hi + eps
            and self.y_lo - eps <= q.y <= self.y_hi + eps
        )


def _signed_area(vertices: tuple[Point, ...]) -> float:
    s = 0.0
    n = len(vertices)
    for i in range(n):
        p, q = vertices[i], vertices[(i + 1) % n]
        s += p.x * q.y - q.x * p.y
    return 0.5 * s


def _orient(a: Point, b: Point, c: Point) -> float:
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def _seg_len(a: Point, b: Point) -> float:
    return math.hypot(b.x - a.x, b.y - a.y)


def point_segment_l2(q: Point, a: Point, b: Point) -> float:
    """Euclidean distance from q to the closed segment ab."""
    dx, dy = b.x - a.x, b.y - a.y
    dd = dx * dx + dy * dy
    if dd == 0.0:
        return math.hypot(q.x - a.x, q.y - a.y)
    t = ((q.x - a.x) * dx + (q.y - a.y) * dy) / dd
    t = min(1.0, max(0.0, t))
    return math.hypot(q.x - (a.x + t * dx), q.y - (a.y + t * dy))


def point_segment_l1(q: Point, a: Point, b: Point) -> float:
    """l1 distance from q to the closed segment ab (exact).

    The distance is convex piecewise-linear in the segment parameter, so the
    minimum sits at an endpoint or where the segment crosses x = q.x or
    y = q.y.
    """
    dx, dy = b.x - a.x, b.y - a.y
    cand = [0.0, 1.0]
    if dx != 0.0:
        t = (q.x - a.x) / dx
        if 0.0 < t < 1.0:
            cand.append(t)
    if dy != 0.0:
        t = (q.y - a.y) / dy
        if 0.0 < t < 1.0:
            cand.append(t)
    return min(abs(q.x - (a.x + t * dx)) + abs(q.y - (a.y + t * dy)) for t in cand)


def _on_collinear_segment(a: Point, b: Point, q: Point) -> bool:
    return min(a.x, b.x) <= q.x <= max(a.x, b.x) and min(a.y, b.y) <= q.y <= max(a.y, b.y)


def segments_intersect(p1: Point, p2: Point, p3: Point, p4: Point) -> bool:
    """Closed-segment intersection test (touching counts)."""
    o1, o2 = _orient(p3, p4, p1), _orient(p3, p4, p2)
    o3, o4 = _orient(p1, p2, p3), _orient(p1, p2, p4)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_collinear_segment(p3, p4, p1):
        return True
    if o2 == 0 and _on_collinear_segment(p3, p4, p2):
        return True
    if o3 == 0 and _on_collinear_segment(p1, p2, p3):
        return True
    if o4 == 0 and _on_collinear_segment(p1, p2, p4):
        return True
    return False


def segments_properly_cross(p1: Point, p2: Point, p3: Point, p4: Point, eps: float) -> bool:
    """True when the segment interiors cross transversally.

    Grazing contact (an endpoint within eps of the other segment, or
    collinear overlap) does not count.
    """
    o1, o2 = _orient(p3, p4, p1), _orient(p3, p4, p2)
    o3, o4 = _orient(p1, p2, p3), _orient(p1, p2, p4)
    # |_orient(a, b, c)| = |ab| * dist(c, line ab); scale eps accordingly
    t34 = _seg_len(p3, p4) * eps
    t12 = _seg_len(p1, p2) * eps
    if abs(o1) <= t34 or abs(o2) <= t34 or abs(o3) <= t12 or abs(o4) <= t12:
        return False
    return (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0)


def polygon_classify(vertices: tuple[Point, ...], q: Point, eps: float) -> str:
    """Classify q against the polygon: 'in', 'on' (within eps) or 'out'."""
    n = len(vertices)
    for i in range(n):
        if point_segment_l2(q, vertices[i], vertices[(i + 1) % n]) <= eps:
            return "on"
    inside = False
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if (a.y > q.y) != (b.y > q.y):
            x_cross = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if q.x < x_cross:
                inside = not inside
    return "in" if inside else "out"


@dataclass(frozen=True)
class Polygon:
    """Simple CCW polygon in local coordinates; the root is the local origin."""

    vertices: tuple[Point, ...]

    _require_origin = True

    def __post_init__(self):
        verts = tuple(Point(float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 3:
            raise InvalidShapeError("polygon needs at least 3 vertices")
        for p in verts:
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise InvalidShapeError(f"non-finite vertex {p}")
        scale = max(max(abs(p.x), abs(p.y)) for p in verts) or 1.0
        for i in range(n):
            if _seg_len(verts[i], verts[(i + 1) % n]) <= 1e-15 * scale:
                raise InvalidShapeError("zero-length polygon edge")
        if _signed_area(verts) <= 0.0:
            raise InvalidShapeError("polygon must be counter-clockwise with positive area")
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue  # adjacent edges share an endpoint by construction
                if segments_intersect(
                    verts[i], verts[(i + 1) % n], verts[j], verts[(j + 1) % n]
                ):
                    raise InvalidShapeError(f"polygon edges {i} and {j} intersect (not simple)")
        if self._require_origin and polygon_classify(verts, Point(0.0, 0.0), 1e-12 * scale) == "out":
            raise InvalidShapeError("root point (local origin) must lie inside or on the polygon")

    def scaled(self, factor: float) -> "Polygon":
        """Homothety about the local origin (the root point)."""
        return Polygon(tuple(Point(factor * p.x, factor * p.y) for p in self.vertices))


@dataclass(frozen=True)
class RegionPolygon(Polygon):
    """World-frame region of interest: simple and CCW, no origin requirement."""

    _require_origin = False


@dataclass(frozen=True)
class Ellipse:
    """Axis-aligned ellipse centered at the root with semi-axes a (x) and b (y)."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a > 0 and self.b > 0):
            raise InvalidShapeError(f"ellipse semi-axes must be positive finite, got {self}")

    def scaled(self, factor: float) -> "Ellipse":
        return Ellipse(factor * self.a, factor * self.b)


Shape = Union[Polygon, Ellipse]


@dataclass(frozen=True)
class PlacedShape:
    shape: Shape
    root: Point


def translate(shape: Shape, root: Point) -> PlacedShape:
    return PlacedShape(shape, Point(float(root[0]), float(root[1])))


def local_bounds(shape: Shape) -> tuple[float, float, float, float]:
    """(xmin, ymin, xmax, ymax) of the shape in local coordinates."""
    if isinstance(shape, Ellipse):
        return (-shape.a, -shape.b, shape.a, shape.b)
    xs = [p.x for p in shape.vertices]
    ys = [p.y for p in shape.vertices]
    return (min(xs), min(ys), max(xs), max(ys))


def world_vertices(placed: PlacedShape) -> tuple[Point, ...]:
    if isinstance(placed.shape, Ellipse):
        raise UnsupportedShapeError("an ellipse has no vertices")
    r = placed.root
    return tuple(Point(r.x + p.x, r.y + p.y) for p in placed.shape.vertices)


_ELLIPSE_SIDES = 64


@lru_cache(maxsize=256)
def _ellipse_polygon_local(a: float, b: float) -> tuple[Point, ...]:
    """Inscribed 64-gon used wherever an ellipse needs a polygonal stand-in."""
    pts = []
    for j in range(_ELLIPSE_SIDES):
        th = 2.0 * math.pi * j / _ELLIPSE_SIDES
        pts.append(Point(a * math.cos(th), b * math.sin(th)))
    return tuple(pts)


def _outline_vertices(placed: PlacedShape) -> tuple[Point, ...]:
    """World vertices; ellipses fall back to the inscribed 64-gon."""
    if isinstance(placed.shape, Ellipse):
        r = placed.root
        return tuple(
            Point(r.x + p.x, r.y + p.y)
            for p in _ellipse_polygon_local(placed.shape.a, placed.shape.b)
        )
    return world_vertices(placed)


def _edges(vertices: tuple[Point, ...]) -> Iterator[tuple[Point, Point]]:
    n = len(vertices)
    for i in range(n):
        yield vertices[i], vertices[(i + 1) % n]


def contains_point(placed: PlacedShape, q: Point, eps: float = 1e-9) -> bool:
    """Closed containment: boundary points (within eps) count as inside."""
    if isinstance(placed.shape, Ellipse):
        dx = (q.x - placed.root.x) / placed.shape.a
        dy = (q.y - placed.root.y) / placed.shape.b
        return dx * dx + dy * dy <= 1.0 + eps
    return polygon_classify(world_vertices(placed), q, eps) != "out"


def shape_inside_polygon(placed: PlacedShape, region: Polygon, eps: float = 1e-9) -> bool:
    """True when the placed shape lies inside the closed region polygon.

    Polygon shapes: every vertex inside or on the region, and no shape edge
    properly crosses a region edge.  Ellipses: map the world to coordinates
    where the ellipse is the unit circle; the ellipse is inside iff its center
    is in the region and every region edge stays at scaled distance >= 1.
    """
    rv = region.vertices
    if isinstance(placed.shape, Ellipse):
        c, a, b = placed.root, placed.shape.a, placed.shape.b
        if polygon_classify(rv, c, eps) == "out":
            return False
        origin = Point(0.0, 0.0)
        scaled_eps = eps / min(a, b)
        n = len(rv)
        for i in range(n):
            p, q = rv[i], rv[(i + 1) % n]
            sp = Point((p.x - c.x) / a, (p.y - c.y) / b)
            sq = Point((q.x - c.x) / a, (q.y - c.y) / b)
            if point_segment_l2(origin, sp, sq) < 1.0 - scaled_eps:
                return False
        return True
    wv = world_vertices(placed)
    for p in wv:
        if polygon_classify(rv, p, eps) == "out":
            return False
    for sa, sb in _edges(wv):
        for ra, rb in _edges(rv):
            if segments_properly_cross(sa, sb, ra, rb, eps):
                return False
    return True


def _clip_polygon_to_rect(vertices: tuple[Point, ...], rect: Rect) -> list[Point]:
    """Sutherland-Hodgman clip against the rect's four half-planes."""

    def clip(poly: list[Point], inside, cross) -> list[Point]:
        out: list[Point] = []
        n = len(poly)
        for i in range(n):
            cur, nxt = poly[i], poly[(i + 1) % n]
            cur_in, nxt_in = inside(cur), inside(nxt)
            if cur_in:
                out.append(cur)
                if not nxt_in:
                    out.append(cross(cur, nxt))
            elif nxt_in:
                out.append(cross(cur, nxt))
        return out

    def x_cross(bound):
        def f(p, q):
            t = (bound - p.x) / (q.x - p.x)
            return Point(bound, p.y + t * (q.y - p.y))

        return f

    def y_cross(bound):
        def f(p, q):
            t = (bound - p.y) / (q.y - p.y)
            return Point(p.x + t * (q.x - p.x), bound)

        return f

    poly = list(vertices)
    for inside, cross in (
        (lambda p: p.x >= rect.x_lo, x_cross(rect.x_lo)),
        (lambda p: p.x <= rect.x_hi, x_cross(rect.x_hi)),
        (lambda p: p.y >= rect.y_lo, y_cross(rect.y_lo)),
        (lambda p: p.y <= rect.y_hi, y_cross(rect.y_hi)),
    ):
        if not poly:
            return []
        poly = clip(poly, inside, cross)
    return poly


def polygon_rect_overlap_area(vertices: tuple[Point, ...], rect: Rect) -> float:
    """Area of polygon ∩ rect (Sutherland-Hodgman + shoelace)."""
    clipped = _clip_polygon_to_rect(vertices, rect)
    if len(clipped) < 3:
        return 0.0
    return abs(_signed_area(tuple(clipped)))


def interior_intersects_rect(placed: PlacedShape, rect: Rect, eps: float = 1e-9) -> bool:
    """True when the open shape interior and the open rect overlap with
    positive area; tangency and shared-edge contact return False."""
    if isinstance(placed.shape, Ellipse):
        c, a, b = placed.root, placed.shape.a, placed.shape.b
        srect = Rect(
            (rect.x_lo - c.x) / a,
            (rect.y_lo - c.y) / b,
            (rect.x_hi - c.x) / a,
            (rect.y_hi - c.y) / b,
        )
        near = srect.clamp(Point(0.0, 0.0))
        # nearest point of the closed rect strictly inside the unit disc
        # means a positive-area overlap
        return math.hypot(near.x, near.y) < 1.0 - eps / min(a, b)
    wv = world_vertices(placed)
    xmin, ymin, xmax, ymax = local_bounds(placed.shape)
    diag = math.hypot(rect.width, rect.height) + math.hypot(xmax - xmin, ymax - ymin)
    return polygon_rect_overlap_area(wv, rect) > eps * diag


@lru_cache(maxsize=1024)
def _polygon_edge_normals(poly: Polygon) -> tuple[tuple[float, float, float], ...]:
    """Per-edge (nx, ny, c) with outward normal n and n.v1 = c > 0.

    Raises GaugeDomainError when the origin is not strictly interior to every
    edge's supporting half-plane (off-origin root or non-convex shape).
    """
    out = []
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        nx, ny = q.y - p.y, p.x - q.x  # outward for CCW
        c = nx * p.x + ny * p.y
        if c <= 1e-12 * math.hypot(nx, ny) * max(abs(p.x), abs(p.y), abs(q.x), abs(q.y), 1.0):
            raise GaugeDomainError(
                "gauge needs the root strictly inside every edge's half-plane "
                "(convex shape with interior root)"
            )
        out.append((nx, ny, c))
    return tuple(out)


def gauge_value(shape: Shape, v: Point) -> float:
    """Minkowski gauge of the vector v with respect to the shape.

    Equals 0 at the origin, 1 on the shape boundary, and scales linearly:
    gauge(t*v) = t*gauge(v).  Meaningful for convex shapes whose root is
    strictly interior.
    """
    if isinstance(shape, Ellipse):
        return math.hypot(v.x / shape.a, v.y / shape.b)
    best = 0.0
    for nx, ny, c in _polygon_edge_normals(shape):
        g = (nx * v.x + ny * v.y) / c
        if g > best:
            best = g
    return best


def max_vertex_distance(q: Point, placed: PlacedShape, norm: Norm) -> float:
    """Largest norm distance from q to any vertex of the placed polygon."""
    if isinstance(placed.shape, Ellipse):
        raise UnsupportedShapeError("vertex-based distance needs a polygon shape")
    return max(norm_distance(q, p, norm) for p in world_vertices(placed))


def _segment_pair_l1(a1: Point, a2: Point, b1: Point, b2: Point) -> float:
    if segments_intersect(a1, a2, b1, b2):
        return 0.0
    return min(
        point_segment_l1(a1, b1, b2),
        point_segment_l1(a2, b1, b2),
        point_segment_l1(b1, a1, a2),
        point_segment_l1(b2, a1, a2),
    )


def _bbox_l1_gap(va: tuple[Point, ...], vb: tuple[Point, ...]) -> float:
    ax0, ax1 = min(p.x for p in va), max(p.x for p in va)
    ay0, ay1 = min(p.y for p in va), max(p.y for p in va)
    bx0, bx1 = min(p.x for p in vb), max(p.x for p in vb)
    by0, by1 = min(p.y for p in vb), max(p.y for p in vb)
    gx = max(bx0 - ax1, ax0 - bx1, 0.0)
    gy = max(by0 - ay1, ay0 - by1, 0.0)
    return gx + gy


def _min_l1_outlines(va: tuple[Point, ...], vb: tuple[Point, ...]) -> float:
    if polygon_classify(vb, va[0], 0.0) != "out" or polygon_classify(va, vb[0], 0.0) != "out":
        return 0.0
    best = math.inf
    for a1, a2 in _edges(va):
        for b1, b2 in _edges(vb):
            # the pairwise distance is at least the bbox gap; skip hopeless pairs
            if _bbox_l1_gap((a1, a2), (b1, b2)) >= best:
                continue
            d = _segment_pair_l1(a1, a2, b1, b2)
            if d < best:
                best = d
                if best == 0.0:
                    return 0.0
    return best


def min_l1_shape_distance(pa: PlacedShape, pb: PlacedShape) -> float:
    """Minimum l1 distance between two placed shapes; 0 when they overlap.

    Exact for polygon pairs: on each segment pair the l1 distance is convex
    piecewise-linear, so the minimum reduces to endpoint-to-segment
    candidates.  Ellipses are approximated by their inscribed 64-gons.
    """
    return _min_l1_outlines(_outline_vertices(pa), _outline_vertices(pb))


def l1_shape_distance_below(pa: PlacedShape, pb: PlacedShape, threshold: float) -> bool:
    """Cheap test for min_l1_shape_distance(pa, pb) < threshold."""
    va, vb = _outline_vertices(pa), _outline_vertices(pb)
    if _bbox_l1_gap(va, vb) >= threshold:
        return False
    return _min_l1_outlines(va, vb) < threshold
