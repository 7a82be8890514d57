"""Arithmetic expression language for densities, cost curves and utility scales.

Expressions are parsed once against a declared variable set and evaluated many
times with plain float bindings.  Supported syntax:

    literals        1, 0.25, 1e-3
    variables       any declared name
    operators       + - * /  and unary -
    comparisons     <  <=  >  >=   (evaluate to 1.0 / 0.0)
    functions       min  max  abs  sqrt  pow  if

``if(c, a, b)`` is lazy: only the taken branch is evaluated.  Domain failures
(division by zero, sqrt of a negative, invalid pow) raise ExprDomainError
instead of producing NaN or inf.

Precedence, loosest to tightest: comparisons, additive, multiplicative,
unary minus, calls/atoms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Union


class ExprError(Exception):
    """Base class for expression language errors."""


class ExprSyntaxError(ExprError):
    """Malformed source text; ``offset`` is the character offset of the error."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExprNameError(ExprError):
    """Identifier that is neither a declared variable nor a known function."""


class ExprDomainError(ExprError):
    """Evaluation left the function's domain (1/0, sqrt(-1), ...)."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / < <= > >=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple["Expr", ...]


Expr = Union[Num, Var, Neg, BinOp, Call]

# fn name -> (min arity, max arity); None = unbounded
_FUNCTIONS: dict[str, tuple[int, int | None]] = {
    "min": (2, None),
    "max": (2, None),
    "abs": (1, 1),
    "sqrt": (1, 1),
    "pow": (2, 2),
    "if": (3, 3),
}

_CMP_OPS = ("<=", ">=", "<", ">")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, lexeme, offset) triples; kind in num/name/op/end."""
    out: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lexeme = text[i:j]
            try:
                float(lexeme)
            except ValueError:
                raise ExprSyntaxError(f"bad number literal {lexeme!r}", i) from None
            out.append(("num", lexeme, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j], i))
            i = j
            continue
        two = text[i : i + 2]
        if two in ("<=", ">="):
            out.append(("op", two, i))
            i += 2
            continue
        if c in "+-*/<>(),":
            out.append(("op", c, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], variables: frozenset[str]):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, lexeme: str) -> None:
        kind, lex, off = self.peek()
        if kind == "end" or lex != lexeme:
            raise ExprSyntaxError(f"expected {lexeme!r}", off)
        self.advance()

    def parse(self) -> Expr:
        node = self.comparison()
        kind, lex, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {lex!r}", off)
        return node

    def comparison(self) -> Expr:
        node = self.additive()
        while self.peek()[0] == "op" and self.peek()[1] in _CMP_OPS:
            op = self.advance()[1]
            node = BinOp(op, node, self.additive())
        return node

    def additive(self) -> Expr:
        node = self.multiplicative()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.advance()[1]
            node = BinOp(op, node, self.multiplicative())
        return node

    def multiplicative(self) -> Expr:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        kind, lex, _ = self.peek()
        if kind == "op" and lex == "-":
            self.advance()
            return Neg(self.unary())
        return self.primary()

    def primary(self) -> Expr:
        kind, lex, off = self.advance()
        if kind == "num":
            return Num(float(lex))
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                return self.call(lex, off)
            if lex in _FUNCTIONS:
                raise ExprSyntaxError(f"function {lex!r} needs an argument list", off)
            if lex not in self.variables:
                raise ExprNameError(
                    f"unknown variable {lex!r} (declared: {sorted(self.variables)})"
                )
            return Var(lex)
        if kind == "op" and lex == "(":
            node = self.comparison()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected token {lex!r}" if lex else "unexpected end of input", off)

    def call(self, fn: str, off: int) -> Expr:
        if fn not in _FUNCTIONS:
            raise ExprNameError(f"unknown function {fn!r} (known: {sorted(_FUNCTIONS)})")
        self.expect("(")
        args = [self.comparison()]
        while self.peek()[1] == "," and self.peek()[0] == "op":
            self.advance()
            args.append(self.comparison())
        self.expect(")")
        lo, hi = _FUNCTIONS[fn]
        if len(args) < lo or (hi is not None and len(args) > hi):
            want = f"{lo}" if hi == lo else (f">={lo}" if hi is None else f"{lo}..{hi}")
            raise ExprSyntaxError(f"{fn} takes {want} arguments, got {len(args)}", off)
        return Call(fn, tuple(args))


def parse(text: str, variables: Iterable[str] = ()) -> Expr:
    """Parse ``text`` into an immutable AST over the declared ``variables``."""
    return _Parser(_tokenize(text), frozenset(variables)).parse()


def evaluate(node: Expr, env: Mapping[str, float]) -> float:
    """Evaluate with the given variable bindings; always returns a finite float."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise ExprNameError(f"no binding for variable {node.name!r}") from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, env)
    if isinstance(node, BinOp):
        a = evaluate(node.left, env)
        b = evaluate(node.right, env)
        op = node.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0.0:
                raise ExprDomainError("division by zero")
            return a / b
        if op == "<":
            return 1.0 if a < b else 0.0
        if op == "<=":
            return 1.0 if a <= b else 0.0
        if op == ">":
            return 1.0 if a > b else 0.0
        if op == ">=":
            return 1.0 if a >= b else 0.0
        raise AssertionError(f"unreachable op {op!r}")
    if isinstance(node, Call):
        if node.fn == "if":
            cond = evaluate(node.args[0], env)
            return evaluate(node.args[1] if cond != 0.0 else node.args[2], env)
        args = [evaluate(a, env) for a in node.args]
        if node.fn == "min":
            return min(args)
        if node.fn == "max":
            return max(args)
        if node.fn == "abs":
            return abs(args[0])
        if node.fn == "sqrt":
            if args[0] < 0.0:
                raise ExprDomainError(f"sqrt of negative value {args[0]}")
            return math.sqrt(args[0])
        if node.fn == "pow":
            try:
                out = math.pow(args[0], args[1])
            except (ValueError, OverflowError) as e:
                raise ExprDomainError(f"pow({args[0]}, {args[1]}): {e}") from None
            if math.isinf(out) or math.isnan(out):
                raise ExprDomainError(f"pow({args[0]}, {args[1]}) is not finite")
            return out
        raise AssertionError(f"unreachable fn {node.fn!r}")
    raise TypeError(f"not an Expr node: {node!r}")


def variables_of(node: Expr) -> frozenset[str]:
    """Set of variable names the expression actually references."""
    if isinstance(node, Var):
        return frozenset((node.name,))
    if isinstance(node, Neg):
        return variables_of(node.operand)
    if isinstance(node, BinOp):
        return variables_of(node.left) | variables_of(node.right)
    if isinstance(node, Call):
        out: frozenset[str] = frozenset()
        for a in node.args:
            out |= variables_of(a)
        return out
    return frozenset()


def _level(node: Expr) -> int:
    if isinstance(node, BinOp):
        if node.op in _CMP_OPS:
            return 1
        return 2 if node.op in ("+", "-") else 3
    if isinstance(node, Neg):
        return 4
    return 5


def unparse(node: Expr) -> str:
    """Render back to source text; reparsing gives a structurally equal AST."""

    def wrap(child: Expr, parent_level: int, right_side: bool = False) -> str:
        text = unparse(child)
        lvl = _level(child)
        # left-associative operators: the right child needs parens at equal level
        if lvl < parent_level or (right_side and lvl == parent_level):
            return f"({text})"
        return text

    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + wrap(node.operand, 4)
    if isinstance(node, BinOp):
        lvl = _level(node)
        return f"{wrap(node.left, lvl)} {node.op} {wrap(node.right, lvl, right_side=True)}"
    if isinstance(node, Call):
        return f"{node.fn}({', '.join(unparse(a) for a in node.args)})"
    raise TypeError(f"not an Expr node: {node!r}")
