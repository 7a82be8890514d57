import math
import random

import pytest

from dimfac import expr
from dimfac.expr import (
    BinOp,
    Call,
    ExprDomainError,
    ExprNameError,
    ExprSyntaxError,
    Neg,
    Num,
    Var,
)


def ev(text, **env):
    return expr.evaluate(expr.parse(text, env.keys()), env)


def test_precedence_and_arithmetic():
    assert ev("1+2*3") == 7.0
    assert ev("(1+2)*3") == 9.0
    assert ev("1+2-3+4") == 4.0
    assert ev("8/4/2") == 1.0
    assert ev("-2*3") == -6.0
    assert ev("--2") == 2.0
    assert ev("2*-3") == -6.0


def test_comparisons_yield_indicator_floats():
    assert ev("1 < 2") == 1.0
    assert ev("2 < 1") == 0.0
    assert ev("2 <= 2") == 1.0
    assert ev("2 >= 3") == 0.0
    assert ev("3 > 2") == 1.0
    # comparisons bind loosest: this is (x+1) > (2*2)
    assert ev("x + 1 > 2*2", x=3.5) == 1.0
    assert ev("x + 1 > 2*2", x=2.0) == 0.0


def test_functions():
    assert ev("min(3, 2)") == 2.0
    assert ev("max(1, 2, 3)") == 3.0
    assert ev("abs(-3)") == 3.0
    assert ev("sqrt(9)") == 3.0
    assert ev("pow(2, 3)") == 8.0
    assert ev("if(1, 10, 20)") == 10.0
    assert ev("if(0, 10, 20)") == 20.0


def test_ramp_density_expression():
    # indicator-style ramp: zero left of the midline, linear to the right
    d = expr.parse("if(x >= 0.5, 8*(x - 0.5), 0)", {"x", "y"})
    assert expr.evaluate(d, {"x": 0.75, "y": 0.1}) == 2.0
    assert expr.evaluate(d, {"x": 0.25, "y": 0.9}) == 0.0
    assert expr.evaluate(d, {"x": 0.5, "y": 0.0}) == 0.0


def test_if_is_lazy():
    assert ev("if(t > 0, 1/t, 0)", t=0.0) == 0.0
    assert ev("if(t >= 1, sqrt(t - 1), 0)", t=0.25) == 0.0


def test_domain_errors():
    with pytest.raises(ExprDomainError):
        ev("1/0")
    with pytest.raises(ExprDomainError):
        ev("sqrt(-1)")
    with pytest.raises(ExprDomainError):
        ev("pow(-1, 0.5)")
    with pytest.raises(ExprDomainError):
        ev("1/(x - x)", x=3.0)


def test_unknown_variable_is_a_parse_error():
    with pytest.raises(ExprNameError, match="bogus"):
        expr.parse("2*bogus", {"x"})
    with pytest.raises(ExprNameError, match="frob"):
        expr.parse("frob(2)", {"x"})


def test_syntax_error_reports_offset():
    with pytest.raises(ExprSyntaxError) as ei:
        expr.parse("1 + * 2", {"x"})
    assert ei.value.offset == 4
    with pytest.raises(ExprSyntaxError) as ei:
        expr.parse("min(1)", ())
    with pytest.raises(ExprSyntaxError) as ei:
        expr.parse("(1 + 2", ())
    with pytest.raises(ExprSyntaxError) as ei:
        expr.parse("1 @ 2", ())
    assert ei.value.offset == 2


def test_function_name_without_call_rejected():
    with pytest.raises(ExprSyntaxError):
        expr.parse("sqrt + 1", ())


def test_variables_of():
    node = expr.parse("if(x > 0, y, 2)", {"x", "y", "z"})
    assert expr.variables_of(node) == {"x", "y"}


def _random_ast(rng, depth, names):
    roll = rng.random()
    if depth <= 0 or roll < 0.25:
        if rng.random() < 0.5:
            return Num(round(rng.uniform(0, 10), 3))
        return Var(rng.choice(names))
    if roll < 0.45:
        return Neg(_random_ast(rng, depth - 1, names))
    if roll < 0.8:
        op = rng.choice(["+", "-", "*", "<", "<=", ">", ">="])
        return BinOp(op, _random_ast(rng, depth - 1, names), _random_ast(rng, depth - 1, names))
    fn = rng.choice(["min", "max", "abs", "if"])
    arity = {"min": 2, "max": 2, "abs": 1, "if": 3}[fn]
    return Call(fn, tuple(_random_ast(rng, depth - 1, names) for _ in range(arity)))


def test_unparse_roundtrip_random_asts():
    rng = random.Random(20260823)
    names = ["x", "y", "t"]
    env = {"x": 0.3, "y": -1.25, "t": 2.0}
    for _ in range(300):
        node = _random_ast(rng, 4, names)
        text = expr.unparse(node)
        back = expr.parse(text, names)
        assert back == node, text
        assert expr.evaluate(back, env) == expr.evaluate(node, env)


def test_unparse_keeps_precedence():
    node = expr.parse("(1 + x) * 3 - 2", {"x"})
    again = expr.parse(expr.unparse(node), {"x"})
    assert again == node
    assert math.isclose(expr.evaluate(node, {"x": 1.0}), 4.0)
