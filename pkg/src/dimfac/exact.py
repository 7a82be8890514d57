"""Exhaustive solver and MILP export for the discretized problem.

`enumerate_exact` walks every combination of feasible cells, so it is only
for small grids.  `build_milp_model` assembles the assignment-linearized
mixed-integer model and `write_lp` serializes it in CPLEX LP syntax;
`parse_lp` reads exactly the dialect this module writes, which the tests
use to round-trip models.  `evaluate_model_at_placement` turns a placement
into a full variable assignment and checks it against every row, tying the
MILP back to the plain objective.
"""

from __future__ import annotations

import bisect
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .costs import PiecewiseLinear
from .evaluate import Evaluation, Evaluator, Facility, objective, solve_lower_level
from .grid import Cell, DiscretizedInstance, Placement

__all__ = [
    "SizeLimitError",
    "InfeasibleError",
    "ExactResult",
    "enumerate_exact",
    "compute_big_m",
    "LpRow",
    "MilpModel",
    "build_milp_model",
    "write_lp",
    "ParsedLp",
    "parse_lp",
    "ModelWitness",
    "evaluate_model_at_placement",
]

ENUMERATION_LIMIT = 10_000_000
SIZE_WARNING_ROWS = 1_000_000


class SizeLimitError(RuntimeError):
    """Raised when the exhaustive search space is too large to try."""


class InfeasibleError(RuntimeError):
    """Raised when no suitable placement exists at all."""


@dataclass(frozen=True)
class ExactResult:
    placement: Placement
    evaluation: Evaluation
    n_combinations: int
    n_suitable: int


def enumerate_exact(
    di: DiscretizedInstance,
    facs: tuple[Facility, ...],
    lost_cost: PiecewiseLinear,
    limit: int = ENUMERATION_LIMIT,
    evaluator: Evaluator | None = None,
) -> ExactResult:
    """Best placement by brute force over all feasible cell combinations.

    Combinations are visited in lexicographic order and ties on the total
    keep the first (smallest) placement.
    """
    rho = di.n_facilities
    for i in range(rho):
        if not di.feasible[i]:
            raise InfeasibleError(f"facility {i} has no feasible cell")
    n_comb = math.prod(len(di.feasible[i]) for i in range(rho))
    if n_comb > limit:
        raise SizeLimitError(
            f"{n_comb} feasible combinations exceed the enumeration limit {limit}"
        )
    ev = evaluator if evaluator is not None else Evaluator(di, facs)
    fps = [di.footprints[i] for i in range(rho)]
    best = None
    n_suitable = 0
    for placement in itertools.product(*di.feasible):
        ok = True
        for a in range(rho):
            fa = fps[a][placement[a]]
            for b in range(a + 1, rho):
                if not fa.isdisjoint(fps[b][placement[b]]):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        n_suitable += 1
        evaluation = objective(di, facs, lost_cost, placement, evaluator=ev)
        if best is None or evaluation.total < best[0]:
            best = (evaluation.total, placement, evaluation)
    if best is None:
        raise InfeasibleError(
            "no suitable placement: every feasible combination has overlapping footprints"
        )
    return ExactResult(
        placement=best[1],
        evaluation=best[2],
        n_combinations=n_comb,
        n_suitable=n_suitable,
    )


def compute_big_m(
    di: DiscretizedInstance,
    facs: tuple[Facility, ...],
    evaluator: Evaluator | None = None,
) -> float:
    """Smallest constant bounding every unit utility entry from above.

    Scans all facilities, feasible cells and working cells; access-cost
    entries on footprints are included (they are negative, so they never
    win, but the scan is the definition).
    """
    ev = evaluator if evaluator is not None else Evaluator(di, facs)
    best = -math.inf
    for i in range(di.n_facilities):
        if not di.feasible[i]:
            raise InfeasibleError(f"facility {i} has no feasible cell")
        for at in di.feasible[i]:
            m = float(np.max(ev.row(i, at)))
            if m > best:
                best = m
    return best


# ---------------------------------------------------------------------------
# model assembly


def _pad(n: int) -> str:
    return f"{n:03d}"


def _place_var(i: int, at: Cell) -> str:
    return f"t_{_pad(i)}_{_pad(at[0])}_{_pad(at[1])}"


def _assign_var(i: int, cell: Cell) -> str:
    return f"a_{_pad(i)}_{_pad(cell[0])}_{_pad(cell[1])}"


def _level_var(cell: Cell) -> str:
    return f"p_{_pad(cell[0])}_{_pad(cell[1])}"


@dataclass
class LpRow:
    name: str
    coeffs: dict[str, float]
    sense: str  # "<=", ">=", "="
    rhs: float


@dataclass
class MilpModel:
    di: DiscretizedInstance
    facs: tuple[Facility, ...]
    lost_cost: PiecewiseLinear
    evaluator: Evaluator
    big_m: float
    objective_coeffs: dict[str, float]
    objective_constant: float
    rows: list[LpRow]
    var_order: list[str]
    binaries: list[str]
    free_vars: list[str]
    warnings: list[str] = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_vars(self) -> int:
        return len(self.var_order)


class _Builder:
    def __init__(self):
        self.rows: list[LpRow] = []
        self.var_order: list[str] = []
        self.seen: set[str] = set()
        self.binaries: list[str] = []
        self.free_vars: list[str] = []
        self.obj: dict[str, float] = {}
        self.obj_const = 0.0

    def var(self, name: str, kind: str = "continuous") -> str:
        if name not in self.seen:
            self.seen.add(name)
            self.var_order.append(name)
            if kind == "binary":
                self.binaries.append(name)
            elif kind == "free":
                self.free_vars.append(name)
        return name

    def add_row(self, name, coeffs, sense, rhs, keep=None):
        kept = {v: c for v, c in coeffs.items() if c != 0.0}
        if not kept:
            # degenerate row (zero demand cell): keep one explicit zero term
            anchor = keep if keep is not None else next(iter(coeffs))
            kept = {anchor: 0.0}
        self.rows.append(LpRow(name, kept, sense, rhs))

    def add_objective(self, coeffs: dict[str, float]) -> None:
        for v, c in coeffs.items():
            if c != 0.0:
                self.obj[v] = self.obj.get(v, 0.0) + c


def _linearize_cost(
    b: _Builder, tag: str, curve: PiecewiseLinear, arg: dict[str, float]
) -> None:
    """Add the value of `curve` at the linear form `arg` to the objective.

    Affine curves are inlined.  Convex curves get an epigraph variable and
    one row per segment.  Anything else uses a disaggregated convex
    combination with one binary per segment.  In all cases the model
    extrapolates the end segments instead of clamping.
    """
    omegas, values = curve.omegas, curve.values
    slopes = curve.slopes()
    if curve.is_affine():
        s = slopes[0]
        b.add_objective({v: s * c for v, c in arg.items()})
        b.obj_const += values[0] - s * omegas[0]
        return
    if curve.is_convex():
        fvar = b.var(f"f_{tag}", kind="free")
        b.add_objective({fvar: 1.0})
        for k, s in enumerate(slopes):
            coeffs = {fvar: 1.0}
            for v, c in arg.items():
                coeffs[v] = coeffs.get(v, 0.0) - s * c
            b.add_row(f"c_pl_{tag}_{_pad(k)}", coeffs, ">=", values[k] - s * omegas[k], keep=fvar)
        return
    n_seg = len(omegas) - 1
    zs, y0s, y1s = [], [], []
    for k in range(n_seg):
        zs.append(b.var(f"z_{tag}_{_pad(k)}", kind="binary"))
        y0s.append(b.var(f"y_{tag}_{_pad(k)}_0"))
        y1s.append(b.var(f"y_{tag}_{_pad(k)}_1"))
    b.add_row(f"c_pl_{tag}_pick", {z: 1.0 for z in zs}, "=", 1.0)
    for k in range(n_seg):
        b.add_row(
            f"c_pl_{tag}_seg_{_pad(k)}",
            {y0s[k]: 1.0, y1s[k]: 1.0, zs[k]: -1.0},
            "=",
            0.0,
        )
    link: dict[str, float] = {}
    for k in range(n_seg):
        link[y0s[k]] = link.get(y0s[k], 0.0) + omegas[k]
        link[y1s[k]] = link.get(y1s[k], 0.0) + omegas[k + 1]
    for v, c in arg.items():
        link[v] = link.get(v, 0.0) - c
    b.add_row(f"c_pl_{tag}_link", link, "=", 0.0, keep=y0s[0])
    obj = {}
    for k in range(n_seg):
        obj[y0s[k]] = obj.get(y0s[k], 0.0) + values[k]
        obj[y1s[k]] = obj.get(y1s[k], 0.0) + values[k + 1]
    b.add_objective(obj)


def _span_warning(tag: str, curve: PiecewiseLinear, reach_hi: float) -> str | None:
    if curve.omegas[0] > 0.0 or curve.omegas[-1] < reach_hi - 1e-12:
        return (
            f"{tag} cost breakpoints [{curve.omegas[0]}, {curve.omegas[-1]}] do not "
            f"cover the reachable range [0, {reach_hi:.6g}]; the MILP extrapolates "
            "end segments there while the evaluator clamps"
        )
    return None


def build_milp_model(
    di: DiscretizedInstance,
    facs: tuple[Facility, ...],
    lost_cost: PiecewiseLinear,
    evaluator: Evaluator | None = None,
) -> MilpModel:
    rho = di.n_facilities
    for i in range(rho):
        if not di.feasible[i]:
            raise InfeasibleError(f"facility {i} has no feasible cell")
    ev = evaluator if evaluator is not None else Evaluator(di, facs)
    big_m = compute_big_m(di, facs, evaluator=ev)
    b = _Builder()

    for i in range(rho):
        for at in di.feasible[i]:
            b.var(_place_var(i, at), kind="binary")
    for i in range(rho):
        for cell in di.cells:
            b.var(_assign_var(i, cell), kind="binary")
    for cell in di.cells:
        b.var(_level_var(cell), kind="free")

    # one placement per facility
    for i in range(rho):
        b.add_row(
            f"c_place_{_pad(i)}",
            {_place_var(i, at): 1.0 for at in di.feasible[i]},
            "=",
            1.0,
        )

    # covering placements per cell: cell is either inside one footprint or
    # assigned to exactly one facility
    covers: dict[Cell, dict[str, float]] = {cell: {} for cell in di.cells}
    for i in range(rho):
        for at in di.feasible[i]:
            tname = _place_var(i, at)
            for cell in di.footprints[i][at]:
                covers[cell][tname] = covers[cell].get(tname, 0.0) + 1.0
    for cell in di.cells:
        coeffs = {_assign_var(i, cell): 1.0 for i in range(rho)}
        coeffs.update(covers[cell])
        b.add_row(f"c_cell_{_pad(cell[0])}_{_pad(cell[1])}", coeffs, "=", 1.0)

    # rows per (cell, facility): assignment optimality, then the two-sided
    # big-M link pinning the cell's utility variable to its assignee
    rows_u: dict[int, dict[Cell, np.ndarray]] = {}
    for i in range(rho):
        rows_u[i] = {at: ev.row(i, at) for at in di.feasible[i]}
    access = [fac.access_cost for fac in facs]
    for pos, cell in enumerate(di.cells):
        wd = di.wd_array[pos]
        pname = _level_var(cell)
        for i in range(rho):
            coeffs = {_assign_var(j, cell): access[j] * wd for j in range(rho)}
            coeffs[pname] = coeffs.get(pname, 0.0) + wd
            for at in di.feasible[i]:
                u = float(rows_u[i][at][pos])
                tname = _place_var(i, at)
                coeffs[tname] = coeffs.get(tname, 0.0) - wd * u
            b.add_row(
                f"c_opt_{_pad(cell[0])}_{_pad(cell[1])}_{_pad(i)}",
                coeffs,
                "<=",
                access[i] * wd,
                keep=pname,
            )
        for i in range(rho):
            aname = _assign_var(i, cell)
            lo = {aname: big_m, pname: -1.0}
            hi = {aname: big_m, pname: 1.0}
            for at in di.feasible[i]:
                u = float(rows_u[i][at][pos])
                tname = _place_var(i, at)
                lo[tname] = lo.get(tname, 0.0) + u
                hi[tname] = hi.get(tname, 0.0) - u
            stem = f"_{_pad(cell[0])}_{_pad(cell[1])}_{_pad(i)}"
            b.add_row("c_ulo" + stem, lo, "<=", big_m, keep=pname)
            b.add_row("c_uhi" + stem, hi, "<=", big_m, keep=pname)

    # objective: install and congestion per facility plus lost demand
    warns: list[str] = []
    lost_arg: dict[str, float] = {}
    for i in range(rho):
        inst_arg = {
            _place_var(i, at): di.fp_install_sum[i][at] for at in di.feasible[i]
        }
        _linearize_cost(b, f"inst_{_pad(i)}", facs[i].install_cost, inst_arg)
        w = _span_warning(
            f"facility {i} install",
            facs[i].install_cost,
            max(di.fp_install_sum[i].values()),
        )
        if w:
            warns.append(w)
        cong_arg = {
            _assign_var(i, cell): float(di.wd_array[pos])
            for pos, cell in enumerate(di.cells)
        }
        _linearize_cost(b, f"cong_{_pad(i)}", facs[i].congestion_cost, cong_arg)
        w = _span_warning(f"facility {i} congestion", facs[i].congestion_cost, di.total_demand())
        if w:
            warns.append(w)
        for at in di.feasible[i]:
            tname = _place_var(i, at)
            lost_arg[tname] = lost_arg.get(tname, 0.0) + di.fp_demand_sum[i][at]
    _linearize_cost(b, "lost", lost_cost, lost_arg)
    reach_lost = sum(
        max(di.fp_demand_sum[i].values()) for i in range(rho) if di.fp_demand_sum[i]
    )
    w = _span_warning("lost demand", lost_cost, reach_lost)
    if w:
        warns.append(w)

    if len(b.rows) > SIZE_WARNING_ROWS:
        warns.append(
            f"model has {len(b.rows)} rows; consider a coarser grid before solving"
        )
    for w in warns:
        warnings.warn(w, stacklevel=2)

    return MilpModel(
        di=di,
        facs=facs,
        lost_cost=lost_cost,
        evaluator=ev,
        big_m=big_m,
        objective_coeffs=b.obj,
        objective_constant=b.obj_const,
        rows=b.rows,
        var_order=b.var_order,
        binaries=b.binaries,
        free_vars=b.free_vars,
        warnings=warns,
    )


# ---------------------------------------------------------------------------
# LP serialization

_LINE_LIMIT = 200


def _num(x: float) -> str:
    return repr(float(x))


def _emit_terms(out: list[str], lead: str, coeffs: dict[str, float], order: dict[str, int]) -> None:
    terms = sorted(coeffs.items(), key=lambda kv: order[kv[0]])
    line = lead
    for name, c in terms:
        piece = f" {'-' if c < 0 or (c == 0.0 and math.copysign(1.0, c) < 0) else '+'} {_num(abs(c))} {name}"
        if len(line) + len(piece) > _LINE_LIMIT:
            out.append(line)
            line = "     "
        line += piece
    out.append(line)


def write_lp(model: MilpModel, warm_start: Placement | None = None) -> str:
    """Serialize the model in CPLEX LP format.

    A warm start placement, when given, is embedded as a comment block of
    `name = value` hints for the binary variables.
    """
    order = {name: pos for pos, name in enumerate(model.var_order)}
    out: list[str] = []
    out.append("\\ discretized facility placement model")
    out.append(
        f"\\ {model.di.grid.nx}x{model.di.grid.ny} grid, {len(model.di.cells)} cells, "
        f"{model.di.n_facilities} facilities, big-M {_num(model.big_m)}"
    )
    if warm_start is not None:
        out.append("\\ warm start hint:")
        for name, val in _warm_start_values(model, warm_start):
            out.append(f"\\ {name} = {val}")
    out.append("Minimize")
    obj = dict(model.objective_coeffs)
    lead = " obj:"
    if model.objective_constant != 0.0:
        # CPLEX accepts a bare constant in the objective
        lead += f" {_num(model.objective_constant)}"
    _emit_terms(out, lead, obj, order)
    out.append("Subject To")
    for row in model.rows:
        _emit_terms(out, f" {row.name}:", row.coeffs, order)
        out[-1] += f" {row.sense} {_num(row.rhs)}"
    if model.free_vars:
        out.append("Bounds")
        for name in model.free_vars:
            out.append(f" {name} free")
    if model.binaries:
        out.append("Binary")
        line = ""
        for name in model.binaries:
            piece = f" {name}"
            if len(line) + len(piece) > _LINE_LIMIT:
                out.append(line)
                line = ""
            line += piece
        out.append(line)
    out.append("End")
    return "\n".join(out) + "\n"


def _warm_start_values(model: MilpModel, placement: Placement):
    di = model.di
    alloc = solve_lower_level(di, model.facs, placement, evaluator=model.evaluator)
    hints = []
    for i, at in enumerate(placement):
        hints.append((_place_var(i, at), 1))
    for cell, i in sorted(alloc.assigned_to.items()):
        hints.append((_assign_var(i, cell), 1))
    return hints


# ---------------------------------------------------------------------------
# LP parsing (the dialect written above, used for round-trip tests)


@dataclass
class ParsedLp:
    objective: dict[str, float]
    objective_constant: float
    rows: list[LpRow]
    free_vars: list[str]
    binaries: list[str]

    @property
    def variables(self) -> set[str]:
        seen = set(self.objective)
        for row in self.rows:
            seen.update(row.coeffs)
        seen.update(self.free_vars)
        seen.update(self.binaries)
        return seen


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def parse_lp(text: str) -> ParsedLp:
    lines = []
    for raw in text.splitlines():
        body = raw.split("\\", 1)[0]
        if body.strip():
            lines.append(body)
    toks = " ".join(lines).split()
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        return tok

    if take().lower() not in ("minimize", "min"):
        raise ValueError("expected Minimize")

    def read_linear(stop_words):
        """Read [const] (+|-) coef name ... until a stop word or sense."""
        coeffs: dict[str, float] = {}
        const = 0.0
        sign = 1.0
        pending: tuple[float, float] | None = None  # (magnitude, its sign)

        def flush():
            nonlocal const, pending
            if pending is not None:
                const += pending[0] * pending[1]
                pending = None

        while True:
            tok = peek()
            if tok is None or tok.lower() in stop_words or tok in ("<=", ">=", "="):
                break
            tok = take()
            if tok == "+":
                flush()
                sign = 1.0
            elif tok == "-":
                flush()
                sign = -1.0
            elif _is_number(tok):
                flush()
                pending = (float(tok), sign)
                sign = 1.0
            else:
                if pending is not None:
                    coeffs[tok] = coeffs.get(tok, 0.0) + pending[0] * pending[1]
                    pending = None
                else:
                    coeffs[tok] = coeffs.get(tok, 0.0) + sign
                    sign = 1.0
        flush()
        return coeffs, const

    # objective: label then linear form
    tok = take()
    if not tok.endswith(":"):
        raise ValueError(f"expected objective label, got {tok!r}")
    obj, obj_const = read_linear({"subject", "st", "s.t."})
    tok = take()
    if tok.lower() == "subject":
        if take().lower() != "to":
            raise ValueError("expected 'Subject To'")

    rows: list[LpRow] = []
    section_words = {"bounds", "binary", "binaries", "general", "end"}
    while peek() is not None and peek().lower() not in section_words:
        label = take()
        if not label.endswith(":"):
            raise ValueError(f"expected row label, got {label!r}")
        coeffs, const = read_linear(section_words)
        sense = take()
        if sense not in ("<=", ">=", "="):
            raise ValueError(f"expected sense in row {label!r}, got {sense!r}")
        rhs = float(take())
        rows.append(LpRow(label[:-1], coeffs, sense, rhs - const))

    free_vars: list[str] = []
    binaries: list[str] = []
    while peek() is not None:
        section = take().lower()
        if section == "end":
            break
        if section == "bounds":
            while peek() is not None and peek().lower() not in section_words:
                name = take()
                mode = take()
                if mode.lower() != "free":
                    raise ValueError(f"unsupported bound {mode!r} for {name}")
                free_vars.append(name)
        elif section in ("binary", "binaries"):
            while peek() is not None and peek().lower() not in section_words:
                binaries.append(take())
        else:
            raise ValueError(f"unsupported section {section!r}")
    return ParsedLp(obj, obj_const, rows, free_vars, binaries)


# ---------------------------------------------------------------------------
# witness evaluation


@dataclass(frozen=True)
class ModelWitness:
    values: dict[str, float]
    model_objective: float
    reference_total: float
    max_violation: float


def evaluate_model_at_placement(model: MilpModel, placement: Placement) -> ModelWitness:
    """Turn a placement into a full MILP variable assignment and check it.

    The lower level is solved exactly; utility variables take the value of
    the cell's assignee (or its coverer's access cost).  Every row is then
    checked, so a violation indicates the model and the evaluator disagree.
    """
    di = model.di
    rho = di.n_facilities
    ev = model.evaluator
    values = {name: 0.0 for name in model.var_order}
    for i, at in enumerate(placement):
        name = _place_var(i, tuple(at))
        if name not in values:
            raise ValueError(f"facility {i} cannot be placed at {tuple(at)}")
        values[name] = 1.0

    alloc = solve_lower_level(di, model.facs, placement, evaluator=ev)
    rows_at = [ev.row(i, tuple(placement[i])) for i in range(rho)]
    access = [fac.access_cost for fac in model.facs]
    for pos, cell in enumerate(di.cells):
        owner = alloc.assigned_to.get(cell)
        if owner is not None:
            values[_assign_var(owner, cell)] = 1.0
            values[_level_var(cell)] = float(rows_at[owner][pos])
            continue
        # covered cell: the model leaves its utility variable loose inside
        # an interval; pick a value in it (0 whenever the interval allows)
        us = [float(rows_at[i][pos]) for i in range(rho)]
        lo = max(u - model.big_m for u in us)
        his = [model.big_m + u for u in us]
        if di.wd_array[pos] > 0.0:
            his.extend(access[i] + us[i] for i in range(rho))
        hi = min(his)
        if lo > hi + 1e-12:
            raise ValueError(
                f"cell {cell}: no feasible utility value; the minimal big-M "
                "cannot absorb an access cost this large"
            )
        values[_level_var(cell)] = min(max(0.0, lo), hi)

    inst_args = [di.fp_install_sum[i][tuple(placement[i])] for i in range(rho)]
    cong_args = list(alloc.assigned_mass)
    lost_arg = alloc.lost_mass
    for i in range(rho):
        _witness_cost(values, f"inst_{_pad(i)}", model.facs[i].install_cost, inst_args[i])
        _witness_cost(values, f"cong_{_pad(i)}", model.facs[i].congestion_cost, cong_args[i])
    _witness_cost(values, "lost", model.lost_cost, lost_arg)

    worst = 0.0
    for row in model.rows:
        lhs = sum(c * values[v] for v, c in row.coeffs.items())
        if row.sense == "<=":
            viol = lhs - row.rhs
        elif row.sense == ">=":
            viol = row.rhs - lhs
        else:
            viol = abs(lhs - row.rhs)
        if viol > worst:
            worst = viol
        tol = 1e-7 * max(1.0, abs(row.rhs))
        if viol > tol:
            raise ValueError(
                f"row {row.name} violated by {viol:.3e} at this placement"
            )

    model_obj = model.objective_constant + sum(
        c * values[v] for v, c in model.objective_coeffs.items()
    )
    reference = objective(di, model.facs, model.lost_cost, placement, evaluator=ev).total
    return ModelWitness(
        values=values,
        model_objective=model_obj,
        reference_total=reference,
        max_violation=worst,
    )


def _witness_cost(values: dict[str, float], tag: str, curve: PiecewiseLinear, arg: float) -> None:
    omegas, vals = curve.omegas, curve.values
    slopes = curve.slopes()
    if curve.is_affine():
        return
    if curve.is_convex():
        values[f"f_{tag}"] = max(
            vals[k] + s * (arg - omegas[k]) for k, s in enumerate(slopes)
        )
        return
    k = bisect.bisect_right(omegas, arg) - 1
    k = min(max(k, 0), len(omegas) - 2)
    values[f"z_{tag}_{_pad(k)}"] = 1.0
    width = omegas[k + 1] - omegas[k]
    frac = (arg - omegas[k]) / width
    frac = min(max(frac, 0.0), 1.0)
    values[f"y_{tag}_{_pad(k)}_0"] = 1.0 - frac
    values[f"y_{tag}_{_pad(k)}_1"] = frac
