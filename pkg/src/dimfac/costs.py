"""Piecewise-linear cost curves for installation, congestion and lost demand.

A curve is a list of (omega, value) breakpoints with strictly increasing
omegas, non-decreasing and non-negative values.  Evaluation interpolates
linearly between breakpoints and clamps outside the covered range, so a curve
never extrapolates.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from . import expr as ex


class InvalidCostCurveError(ValueError):
    """Breakpoints violate a cost-curve invariant."""


@dataclass(frozen=True)
class PiecewiseLinear:
    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        bps = tuple((float(w), float(v)) for w, v in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) < 2:
            raise InvalidCostCurveError("need at least 2 breakpoints")
        for (w0, v0), (w1, v1) in zip(bps, bps[1:]):
            if not w1 > w0:
                raise InvalidCostCurveError(
                    f"breakpoint omegas must strictly increase: {w0} then {w1}"
                )
            if v1 < v0:
                raise InvalidCostCurveError(
                    f"cost must be non-decreasing: {v0} then {v1} on [{w0}, {w1}]"
                )
        for w, v in bps:
            if v < 0.0:
                raise InvalidCostCurveError(f"cost value {v} at omega {w} is negative")

    @property
    def omegas(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.breakpoints)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.breakpoints)

    def slopes(self) -> tuple[float, ...]:
        return tuple(
            (v1 - v0) / (w1 - w0)
            for (w0, v0), (w1, v1) in zip(self.breakpoints, self.breakpoints[1:])
        )

    def is_affine(self) -> bool:
        return len(self.breakpoints) == 2

    def is_convex(self, tol: float = 1e-12) -> bool:
        s = self.slopes()
        return all(b >= a - tol for a, b in zip(s, s[1:]))


def pl_eval(pl: PiecewiseLinear, omega: float) -> float:
    """Evaluate with clamping; hits stored breakpoint values exactly."""
    bps = pl.breakpoints
    if omega <= bps[0][0]:
        return bps[0][1]
    if omega >= bps[-1][0]:
        return bps[-1][1]
    i = bisect_right([w for w, _ in bps], omega) - 1
    w0, v0 = bps[i]
    w1, v1 = bps[i + 1]
    if omega == w0:
        return v0
    return v0 + (v1 - v0) * (omega - w0) / (w1 - w0)


def pl_from_expr(e: ex.Expr, omegas: tuple[float, ...] | list[float]) -> PiecewiseLinear:
    """Sample an expression in ``t`` at the given omegas into a curve.

    Raises InvalidCostCurveError naming the offending sample when the result
    would decrease or go negative.
    """
    ws = [float(w) for w in omegas]
    if len(ws) < 2:
        raise InvalidCostCurveError("need at least 2 sample omegas")
    vals = []
    for w in ws:
        v = ex.evaluate(e, {"t": w})
        if v < 0.0:
            raise InvalidCostCurveError(f"expression is negative at t={w}: {v}")
        vals.append(v)
    for (w0, v0), (w1, v1) in zip(zip(ws, vals), zip(ws[1:], vals[1:])):
        if v1 < v0:
            raise InvalidCostCurveError(
                f"expression decreases on [{w0}, {w1}]: {v0} -> {v1}"
            )
    return PiecewiseLinear(tuple(zip(ws, vals)))


def pl_identity(lo: float = 0.0, hi: float = 1.0) -> PiecewiseLinear:
    return PiecewiseLinear(((lo, lo), (hi, hi)))


def pl_constant(value: float, lo: float = 0.0, hi: float = 1.0) -> PiecewiseLinear:
    return PiecewiseLinear(((lo, value), (hi, value)))
