"""Facility definitions, unit utilities, the lower-level allocation and the
upper-level objective.

Unit utility of serving a demand cell from a placed facility:

* cells inside the facility's footprint get ``-access_cost`` (the facility
  absorbs its own footprint, cancelling the access term);
* other cells get ``scale(t)`` where t is the geometric quantity selected by
  the utility kind: norm distance to the root, the shape gauge of the offset
  (clamped to 0 inside the shape or raw), or the worst-case norm distance to
  the shape's vertices.

The lower level assigns every non-covered cell to the facility minimizing
``wd * (access_cost + utility)``, ties to the lowest facility index; this
per-cell argmin is exact because the allocation objective is separable across
cells.  The upper-level objective adds piecewise-linear installation,
congestion, and lost-demand costs of the resulting masses.
"""

from __future__ import annotations

import warnings
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .costs import PiecewiseLinear, pl_eval
from .geometry import (
    Ellipse,
    Norm,
    Point,
    Shape,
    UnsupportedShapeError,
    gauge_value,
    max_vertex_distance,
    norm_distance,
    translate,
)
from .grid import Cell, DiscretizedInstance, Placement, placement_violation

_UTILITY_KINDS = ("norm_to_root", "gauge", "max_distance")


class UnsuitablePlacementError(ValueError):
    """Placement violates feasibility or footprint disjointness."""


@dataclass(frozen=True)
class UtilitySpec:
    """How a facility's service cost grows with distance.

    ``scale`` is an expression in the single variable ``t`` mapping the
    geometric quantity to a cost; it should be non-decreasing on the reachable
    range (checked by ``check_scale_monotone``, a warning not an error).
    """

    kind: str
    scale: ex.Expr
    norm: Norm | None = None
    clamped: bool = True

    def __post_init__(self):
        if self.kind not in _UTILITY_KINDS:
            raise ValueError(f"unknown utility kind {self.kind!r}; expected {_UTILITY_KINDS}")
        if self.kind in ("norm_to_root", "max_distance") and self.norm is None:
            raise ValueError(f"utility kind {self.kind!r} needs a norm")
        extra = ex.variables_of(self.scale) - {"t"}
        if extra:
            raise ValueError(f"scale expression may only use 't', found {sorted(extra)}")


@dataclass(frozen=True)
class Facility:
    shape: Shape
    access_cost: float
    utility: UtilitySpec
    install_cost: PiecewiseLinear
    congestion_cost: PiecewiseLinear
    name: str = ""

    def __post_init__(self):
        if self.access_cost < 0:
            raise ValueError(f"access cost must be non-negative, got {self.access_cost}")
        if self.utility.kind == "max_distance" and isinstance(self.shape, Ellipse):
            raise UnsupportedShapeError("max_distance utility needs a polygon shape")


def check_scale_monotone(spec: UtilitySpec, t_max: float, samples: int = 512) -> None:
    """Warn when the scale expression decreases somewhere on [0, t_max]."""
    prev = ex.evaluate(spec.scale, {"t": 0.0})
    for i in range(1, samples + 1):
        t = t_max * i / samples
        v = ex.evaluate(spec.scale, {"t": t})
        if v < prev - 1e-12:
            warnings.warn(
                f"utility scale decreases near t={t:.6g} ({prev:.6g} -> {v:.6g}); "
                "the allocation model expects non-decreasing scales",
                stacklevel=2,
            )
            return
        prev = v


def utility_value(fac: Facility, root: Point, q: Point) -> float:
    """Geometric utility of serving point q from the facility rooted at root."""
    spec = fac.utility
    if spec.kind == "norm_to_root":
        t = norm_distance(q, root, spec.norm)
    elif spec.kind == "gauge":
        g = gauge_value(fac.shape, Point(q.x - root.x, q.y - root.y))
        t = max(g - 1.0, 0.0) if spec.clamped else g
    else:  # max_distance
        t = max_vertex_distance(q, translate(fac.shape, root), spec.norm)
    return ex.evaluate(spec.scale, {"t": t})


def unit_utility(
    di: DiscretizedInstance, fac: Facility, i: int, at: Cell, cell: Cell
) -> float:
    """Utility table entry for facility i placed at ``at`` serving ``cell``."""
    at = tuple(at)
    cell = tuple(cell)
    if at not in di.feasible_sets[i]:
        raise ValueError(f"placement cell {at} not feasible for facility {i}")
    if cell not in di.cell_pos:
        raise ValueError(f"{cell} is not a working cell")
    if cell in di.footprints[i][at]:
        return -fac.access_cost
    return utility_value(fac, di.grid.cell_center(at), di.grid.cell_center(cell))


class Evaluator:
    """Bounded cache of per-(facility, placement-cell) utility rows.

    Rows are built with scalar ``unit_utility`` calls, so vectorized and
    spot-check paths see bitwise-identical numbers.  One evaluator serves a
    fixed (instance, facility list) pair; solvers thread one through a run.
    """

    def __init__(self, di: DiscretizedInstance, facs: tuple[Facility, ...], max_rows: int = 8192):
        if len(facs) != di.n_facilities:
            raise ValueError(f"{len(facs)} facilities for {di.n_facilities} shapes")
        for i, f in enumerate(facs):
            if f.shape != di.shapes[i]:
                raise ValueError(f"facility {i} shape differs from the discretized shape")
        self.di = di
        self.facs = tuple(facs)
        self.max_rows = max_rows
        self._rows: OrderedDict[tuple[int, Cell], np.ndarray] = OrderedDict()

    def row(self, i: int, at: Cell) -> np.ndarray:
        key = (i, tuple(at))
        hit = self._rows.get(key)
        if hit is not None:
            self._rows.move_to_end(key)
            return hit
        di, fac = self.di, self.facs[i]
        row = np.array([unit_utility(di, fac, i, key[1], c) for c in di.cells])
        row.setflags(write=False)
        self._rows[key] = row
        if len(self._rows) > self.max_rows:
            self._rows.popitem(last=False)
        return row


@dataclass(frozen=True)
class Allocation:
    """Lower-level response to a placement: cell statuses and masses."""

    covered_by: dict[Cell, int] = field(repr=False)
    assigned_to: dict[Cell, int] = field(repr=False)
    assigned_mass: tuple[float, ...]
    install_mass: tuple[float, ...]
    lost_mass: float


@dataclass(frozen=True)
class Evaluation:
    total: float
    install_costs: tuple[float, ...]
    congestion_costs: tuple[float, ...]
    lost_cost_value: float
    allocation: Allocation = field(repr=False)


def solve_lower_level(
    di: DiscretizedInstance,
    facs: tuple[Facility, ...],
    placement: Placement,
    evaluator: Evaluator | None = None,
) -> Allocation:
    """Optimal allocation of working cells for a suitable placement."""
    violation = placement_violation(di, placement)
    if violation is not None:
        raise UnsuitablePlacementError(violation)
    ev = evaluator if evaluator is not None else Evaluator(di, facs)
    placement = tuple(tuple(at) for at in placement)
    rho = len(facs)
    n = len(di.cells)

    covered_by: dict[Cell, int] = {}
    covered_mask = np.zeros(n, dtype=bool)
    for i, at in enumerate(placement):
        for c in sorted(di.footprints[i][at]):
            covered_by[c] = i
            covered_mask[di.cell_pos[c]] = True

    cost = np.empty((rho, n))
    for i, at in enumerate(placement):
        cost[i] = di.wd_array * (facs[i].access_cost + ev.row(i, at))
    winner = np.argmin(cost, axis=0)  # first minimum: lowest facility index

    assigned_to: dict[Cell, int] = {}
    for pos, c in enumerate(di.cells):
        if not covered_mask[pos]:
            assigned_to[c] = int(winner[pos])

    assigned_mass = tuple(
        float(np.sum(di.wd_array[(winner == i) & ~covered_mask])) for i in range(rho)
    )
    install_mass = tuple(di.fp_install_sum[i][at] for i, at in enumerate(placement))
    lost_mass = sum(di.fp_demand_sum[i][at] for i, at in enumerate(placement))
    return Allocation(
        covered_by=covered_by,
        assigned_to=assigned_to,
        assigned_mass=assigned_mass,
        install_mass=install_mass,
        lost_mass=lost_mass,
    )


def objective(
    di: DiscretizedInstance,
    facs: tuple[Facility, ...],
    lost_cost: PiecewiseLinear,
    placement: Placement,
    evaluator: Evaluator | None = None,
) -> Evaluation:
    """Upper-level cost of a placement under the optimal lower-level response."""
    alloc = solve_lower_level(di, facs, placement, evaluator)
    install = tuple(pl_eval(f.install_cost, m) for f, m in zip(facs, alloc.install_mass))
    congestion = tuple(pl_eval(f.congestion_cost, m) for f, m in zip(facs, alloc.assigned_mass))
    lost = pl_eval(lost_cost, alloc.lost_mass)
    return Evaluation(
        total=sum(install) + sum(congestion) + lost,
        install_costs=install,
        congestion_costs=congestion,
        lost_cost_value=lost,
        allocation=alloc,
    )
