"""Shared fixture builders for the test suite."""

import math
import random

from dimfac import costs, expr
from dimfac.evaluate import Facility, UtilitySpec
from dimfac.geometry import Ellipse, Norm, Point, Polygon, Rect, RegionPolygon
from dimfac.grid import Grid, discretize

UNIT_REGION = RegionPolygon((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)))


def csquare(side, cx=0.0, cy=0.0):
    h = side / 2
    return Polygon(
        (Point(cx - h, cy - h), Point(cx + h, cy - h), Point(cx + h, cy + h), Point(cx - h, cy + h))
    )


def diamond(rx, ry):
    return Polygon((Point(rx, 0), Point(0, ry), Point(-rx, 0), Point(0, -ry)))


def star_polygon(rng, r_lo, r_hi, n_vertices=6):
    """Random simple polygon star-shaped about the origin."""
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n_vertices))
    # gaps must stay under pi (origin inside) and away from 0 (clean edges)
    gaps = [b - a for a, b in zip(angles, angles[1:])]
    gaps.append(2 * math.pi - angles[-1] + angles[0])
    if min(gaps) < 1e-2 or max(gaps) > 0.9 * math.pi:
        return star_polygon(rng, r_lo, r_hi, n_vertices)
    radii = [rng.uniform(r_lo, r_hi) for _ in angles]
    return Polygon(
        tuple(Point(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, angles))
    )


def make_fac(
    shape,
    a=0.01,
    scale="t",
    kind="norm_to_root",
    norm=None,
    clamped=True,
    install=None,
    congestion=None,
    name="",
):
    if norm is None and kind in ("norm_to_root", "max_distance"):
        norm = Norm.l2()
    return Facility(
        shape=shape,
        access_cost=a,
        utility=UtilitySpec(kind=kind, scale=expr.parse(scale, {"t"}), norm=norm, clamped=clamped),
        install_cost=install if install is not None else costs.pl_constant(0.0, 0.0, 4.0),
        congestion_cost=congestion if congestion is not None else costs.pl_identity(0.0, 4.0),
        name=name,
    )


def tiny_two_square_instance():
    """2x2 grid over the unit square, two side-0.1 square facilities.

    Uniform unit demand and install densities; identity congestion and lost
    cost, zero install cost.  With placement ((0,0), (1,1)) the footprints are
    exactly the placement cells, both free cells go to facility 0, and the
    total objective is 1.0.
    """
    grid = Grid(Rect(0, 0, 1, 1), 2, 2)
    shapes = (csquare(0.1), csquare(0.1))
    di = discretize(
        UNIT_REGION,
        grid,
        shapes,
        expr.parse("1", {"x", "y"}),
        expr.parse("1", {"x", "y"}),
    )
    facs = (
        make_fac(shapes[0], a=0.0001, name="first"),
        make_fac(shapes[1], a=0.1, name="second"),
    )
    lost = costs.pl_identity(0.0, 4.0)
    return di, facs, lost


def config_dict(nx=2, ny=2, side=0.1, grasp=None):
    """JSON-ready config mirroring the two-square fixtures."""
    h = side / 2
    square = {
        "kind": "polygon",
        "vertices": [[-h, -h], [h, -h], [h, h], [-h, h]],
    }
    d = {
        "region": [[0, 0], [1, 0], [1, 1], [0, 1]],
        "grid": {"nx": nx, "ny": ny},
        "demand_density": "1",
        "install_density": "1",
        "lost_cost": {"breakpoints": [[0, 0], [4, 4]]},
        "facilities": [
            {
                "name": "first",
                "shape": square,
                "access_cost": 0.0001,
                "utility": {"kind": "norm_to_root", "scale": "t", "norm": {"kind": "l2"}},
                "install_cost": {"breakpoints": [[0, 0], [4, 0]]},
                "congestion_cost": {"breakpoints": [[0, 0], [4, 4]]},
            },
            {
                "name": "second",
                "shape": square,
                "access_cost": 0.1,
                "utility": {"kind": "norm_to_root", "scale": "t", "norm": {"kind": "l2"}},
                "install_cost": {"breakpoints": [[0, 0], [4, 0]]},
                "congestion_cost": {"breakpoints": [[0, 0], [4, 4]]},
            },
        ],
    }
    if grasp is not None:
        d["solver"] = {"grasp": grasp}
    return d


def two_square_8x8_instance():
    """8x8 grid over the unit square, two side-0.1 square facilities.

    Same cost structure as the tiny fixture (identity congestion and lost,
    zero install): every suitable placement totals exactly the unit demand,
    so the optimum is 1.0.  Unlike the 2x2 grid, the cell sides are small
    enough for the inflation constructor's separation margin.
    """
    grid = Grid(Rect(0, 0, 1, 1), 8, 8)
    shapes = (csquare(0.1), csquare(0.1))
    di = discretize(
        UNIT_REGION,
        grid,
        shapes,
        expr.parse("1", {"x", "y"}),
        expr.parse("1", {"x", "y"}),
    )
    facs = (
        make_fac(shapes[0], a=0.0001, name="first"),
        make_fac(shapes[1], a=0.1, name="second"),
    )
    lost = costs.pl_identity(0.0, 4.0)
    return di, facs, lost


_DENSITIES = (
    "1",
    "x + y",
    "2 - x - y",
    "if(x >= 0.5, 8*(x - 0.5), 0)",
    "3*abs(x - y)",
    "4*x*y + 0.5",
)

_NORMS = (Norm.l1(), Norm.l2(), Norm.linf(), Norm.weighted_l2(2.0, 1.0))


def _random_curve(rng, hi=4.0):
    roll = rng.random()
    if roll < 0.3:
        return costs.pl_identity(0.0, hi)
    if roll < 0.5:
        return costs.pl_constant(round(rng.uniform(0, 0.5), 3), 0.0, hi)
    if roll < 0.8:
        cap = rng.uniform(0.1, 0.6)
        over = 10.0 * rng.uniform(1, 10)
        return costs.PiecewiseLinear(((0.0, 0.0), (cap, cap), (hi, cap + over * (hi - cap))))
    # concave: fast start then plateau-ish
    mid = rng.uniform(0.2, 0.8)
    return costs.PiecewiseLinear(((0.0, 0.0), (mid, mid * 1.5), (hi, mid * 1.5 + 0.2 * (hi - mid))))


def _random_shape(rng, cell, convex_only=False):
    size = rng.uniform(1.0, 2.4) * cell
    roll = rng.random()
    if roll < 0.35:
        return csquare(size)
    if roll < 0.6:
        return Ellipse(size / 2, size / (2 * rng.uniform(1.0, 2.0)))
    if roll < 0.8 or convex_only:
        return diamond(size / 2, size / (2 * rng.uniform(1.0, 1.8)))
    return star_polygon(rng, 0.35 * size, 0.55 * size)


def _random_utility(rng, shape):
    gauge_ok = isinstance(shape, Ellipse) or rng.random() < 0.5
    roll = rng.random()
    scale = rng.choice(("t", "0.5*t", "2*t", "t + 0.1*t*t", "0.2*t"))
    if roll < 0.5:
        return dict(kind="norm_to_root", scale=scale, norm=rng.choice(_NORMS))
    if roll < 0.75 and not isinstance(shape, Ellipse):
        return dict(kind="max_distance", scale=scale, norm=rng.choice(_NORMS))
    if gauge_ok and _gauge_safe(shape):
        return dict(kind="gauge", scale=scale, clamped=rng.random() < 0.7)
    return dict(kind="norm_to_root", scale=scale, norm=rng.choice(_NORMS))


def _gauge_safe(shape):
    from dimfac.geometry import GaugeDomainError, gauge_value

    try:
        gauge_value(shape, Point(0.37, 0.91))
        return True
    except GaugeDomainError:
        return False


def random_instance(seed, n_max=12, rho_max=3, n_min=4):
    """Seeded random desk-scale instance: (di, facs, lost_cost)."""
    rng = random.Random(seed)
    n = rng.randrange(n_min, n_max + 1)
    rho = rng.randrange(1, rho_max + 1)
    return _build_instance(rng, n, rho)


def desk_instance(seed, n=8, rho=2):
    """Seeded instance with a fixed grid size and facility count."""
    return _build_instance(random.Random(f"desk-{seed}"), n, rho)


def _build_instance(rng, n, rho):
    grid = Grid(Rect(0, 0, 1, 1), n, n)
    cell = 1.0 / n
    shapes = tuple(_random_shape(rng, cell) for _ in range(rho))
    di = discretize(
        UNIT_REGION,
        grid,
        shapes,
        expr.parse(rng.choice(_DENSITIES), {"x", "y"}),
        expr.parse(rng.choice(_DENSITIES), {"x", "y"}),
    )
    facs = tuple(
        make_fac(
            s,
            a=round(rng.uniform(0.001, 0.5), 4),
            install=_random_curve(rng),
            congestion=_random_curve(rng),
            **_random_utility(rng, s),
        )
        for s in shapes
    )
    lost = _random_curve(rng)
    return di, facs, lost


def random_suitable_placement(di, rng, tries=4000):
    """Rejection-sample a suitable placement, or None when exhausted."""
    from dimfac.grid import placement_is_suitable

    if any(len(f) == 0 for f in di.feasible):
        return None
    for _ in range(tries):
        p = tuple(rng.choice(f) for f in di.feasible)
        if placement_is_suitable(di, p):
            return p
    return None


def predicted_counts(di, facs, lost):
    """Expected row/var counts from the instance tables and curve classes."""
    rho = di.n_facilities
    n = len(di.cells)
    n_theta = sum(len(di.feasible[i]) for i in range(rho))
    rows = rho + n + n * rho + 2 * n * rho
    nvars = n_theta + n * rho + n
    n_bin = n_theta + n * rho
    n_free = n
    curves = [f.install_cost for f in facs] + [f.congestion_cost for f in facs] + [lost]
    for curve in curves:
        segs = len(curve.omegas) - 1
        if curve.is_affine():
            continue
        if curve.is_convex():
            rows += segs
            nvars += 1
            n_free += 1
        else:
            rows += segs + 2
            nvars += 3 * segs
            n_bin += segs
    return rows, nvars, n_bin, n_free
