import random

import pytest

from dimfac import costs, expr
from dimfac.costs import InvalidCostCurveError, PiecewiseLinear, pl_eval


def test_validation():
    with pytest.raises(InvalidCostCurveError):
        PiecewiseLinear(((0.0, 0.0),))
    with pytest.raises(InvalidCostCurveError):
        PiecewiseLinear(((0.0, 0.0), (0.0, 1.0)))  # omegas not increasing
    with pytest.raises(InvalidCostCurveError):
        PiecewiseLinear(((0.0, 1.0), (1.0, 0.5)))  # decreasing value
    with pytest.raises(InvalidCostCurveError):
        PiecewiseLinear(((0.0, -0.1), (1.0, 1.0)))  # negative
    PiecewiseLinear(((0.0, 0.0), (0.5, 0.0), (1.0, 2.0)))  # plateaus are fine


def test_identity_and_clamping():
    ident = costs.pl_identity()
    assert pl_eval(ident, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert pl_eval(ident, -1.0) == 0.0
    assert pl_eval(ident, 2.0) == 1.0


def test_breakpoints_hit_exactly():
    pl = PiecewiseLinear(((0.0, 0.1), (0.3, 0.4), (0.7, 0.4), (1.0, 2.0)))
    for w, v in pl.breakpoints:
        assert pl_eval(pl, w) == v


def test_interpolation():
    pl = PiecewiseLinear(((0.0, 0.0), (1.0, 2.0)))
    assert pl_eval(pl, 0.25) == pytest.approx(0.5, abs=1e-15)
    rng = random.Random(4)
    pl2 = PiecewiseLinear(((0.0, 1.0), (0.4, 1.0), (1.0, 4.0)))
    for _ in range(100):
        w = rng.uniform(0, 1)
        if w <= 0.4:
            expect = 1.0
        else:
            expect = 1.0 + 3.0 * (w - 0.4) / 0.6
        assert pl_eval(pl2, w) == pytest.approx(expect, abs=1e-12)


def test_capacity_kink_curve():
    # linear up to a threshold, then a steep overload slope
    cap = 1.0 / 6.0
    pl = PiecewiseLinear(((0.0, 0.0), (cap, cap), (1.0, cap + 100 * (1.0 - cap))))
    assert pl_eval(pl, 0.1) == pytest.approx(0.1, abs=1e-12)
    assert pl_eval(pl, 0.2) == pytest.approx(cap + 100 * (0.2 - cap), rel=1e-12)
    assert pl.is_convex()
    assert not pl.is_affine()


def test_from_expr():
    pl = costs.pl_from_expr(expr.parse("t*t", {"t"}), [0.0, 0.5, 1.0])
    assert pl.breakpoints == ((0.0, 0.0), (0.5, 0.25), (1.0, 1.0))
    assert pl.is_convex()


def test_from_expr_rejects_decreasing():
    with pytest.raises(InvalidCostCurveError, match=r"\[0.0, 1.0\]"):
        costs.pl_from_expr(expr.parse("1 - t/2", {"t"}), [0.0, 1.0])
    with pytest.raises(InvalidCostCurveError, match="negative"):
        costs.pl_from_expr(expr.parse("t - 1", {"t"}), [0.0, 0.5])


def test_shape_predicates():
    concave = PiecewiseLinear(((0.0, 0.0), (0.5, 0.4), (1.0, 0.6)))
    assert not concave.is_convex()
    affine = costs.pl_identity()
    assert affine.is_affine() and affine.is_convex()
    const = costs.pl_constant(2.5)
    assert pl_eval(const, 0.7) == 2.5
    assert const.slopes() == (0.0,)


def test_refinement_converges():
    # sampling a smooth curve on finer omega ladders converges to the curve
    e = expr.parse("t*t", {"t"})
    for n in (4, 16, 64):
        ws = [i / n for i in range(n + 1)]
        pl = costs.pl_from_expr(e, ws)
        worst = max(abs(pl_eval(pl, (i + 0.5) / 256) - ((i + 0.5) / 256) ** 2) for i in range(256))
        # linear interpolation error of f'' = 2 on step h is h^2 / 4... use 1/2 margin
        assert worst <= (1.0 / n) ** 2 / 2
