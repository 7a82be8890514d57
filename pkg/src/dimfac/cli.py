"""Command line interface.

Subcommands: solve (grasp or exhaustive), evaluate (score a given
placement), export-milp (write the CPLEX LP file), render (SVG picture of
a saved solution).  Exit codes: 0 on success, 1 on any reported error,
2 on bad command line usage (argparse).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time

from .config import (
    ConfigError,
    InstanceConfig,
    dump_record,
    load_config,
    load_record,
    solution_record,
)
from .costs import InvalidCostCurveError
from .evaluate import UnsuitablePlacementError, objective
from .exact import (
    InfeasibleError,
    SizeLimitError,
    build_milp_model,
    enumerate_exact,
    write_lp,
)
from .expr import ExprError
from .geometry import GeometryError
from .grasp import ConstructionFailureError, NoFeasiblePlacementError, grasp_solve
from .render import render_solution

__all__ = ["main"]

_REPORTED = (
    ConfigError,
    GeometryError,
    ExprError,
    InvalidCostCurveError,
    InfeasibleError,
    SizeLimitError,
    ConstructionFailureError,
    NoFeasiblePlacementError,
    UnsuitablePlacementError,
    ValueError,
    OSError,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimfac",
        description="Place dimensional facilities on a discretized region.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="accepted for compatibility; execution is sequential and the "
        "result does not depend on this value",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance and write a solution record")
    p.add_argument("--config", required=True, help="instance config JSON")
    p.add_argument("--method", choices=("grasp", "exact"), default="grasp")
    p.add_argument("--seed", type=int, default=None, help="override the grasp seed")
    p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("evaluate", help="evaluate a fixed placement")
    p.add_argument("--config", required=True, help="instance config JSON")
    p.add_argument(
        "--placement",
        required=True,
        help="semicolon-separated cells, e.g. '1,2;3,4'",
    )
    p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("export-milp", help="write the MILP in CPLEX LP format")
    p.add_argument("--config", required=True, help="instance config JSON")
    p.add_argument("--out", default=None, help="output .lp file (default: stdout)")
    p.add_argument(
        "--warm-start",
        default=None,
        help="solution record whose placement is embedded as a hint comment",
    )

    p = sub.add_parser("render", help="render a solution record as SVG")
    p.add_argument("--config", required=True, help="instance config JSON")
    p.add_argument("--solution", required=True, help="solution record JSON")
    p.add_argument("--out", default=None, help="output .svg file (default: stdout)")
    p.add_argument("--show-grid", action="store_true", help="draw cell boundaries")
    return parser


def _write_out(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_placement(text: str, rho: int):
    cells = []
    parts = [part for part in text.split(";") if part.strip()]
    for part in parts:
        bits = part.split(",")
        if len(bits) != 2:
            raise ValueError(f"bad placement entry {part.strip()!r}: expected 'k,l'")
        try:
            cells.append((int(bits[0]), int(bits[1])))
        except ValueError:
            raise ValueError(f"bad placement entry {part.strip()!r}: expected integers")
    if len(cells) != rho:
        raise ValueError(
            f"placement names {len(cells)} cells but the config has {rho} facilities"
        )
    return tuple(cells)


def _load(args) -> InstanceConfig:
    return load_config(args.config)


def _cmd_solve(args) -> int:
    cfg = _load(args)
    di = cfg.discretized()
    t0 = time.perf_counter()
    if args.method == "exact":
        res = enumerate_exact(di, cfg.facilities, cfg.lost_cost, limit=cfg.exact_limit)
        placement, evaluation = res.placement, res.evaluation
        seed = None
        info = {"n_combinations": res.n_combinations, "n_suitable": res.n_suitable}
    else:
        params = cfg.grasp_params
        if args.seed is not None:
            params = dataclasses.replace(params, seed=args.seed)
        res = grasp_solve(di, cfg.facilities, cfg.lost_cost, params)
        placement, evaluation = res.placement, res.evaluation
        seed = params.seed
        info = {
            "visits": res.visits,
            "improvements": res.improvements,
            "constructions": res.constructions,
            "step1_best_total": res.step1_best_total,
        }
    seconds = time.perf_counter() - t0
    record = solution_record(
        cfg, di, placement, evaluation, args.method, seconds, seed=seed, solver_info=info
    )
    _write_out(args.out, dump_record(record))
    return 0


def _cmd_evaluate(args) -> int:
    cfg = _load(args)
    placement = _parse_placement(args.placement, len(cfg.facilities))
    di = cfg.discretized()
    t0 = time.perf_counter()
    evaluation = objective(di, cfg.facilities, cfg.lost_cost, placement)
    seconds = time.perf_counter() - t0
    record = solution_record(cfg, di, placement, evaluation, "evaluate", seconds)
    _write_out(args.out, dump_record(record))
    return 0


def _cmd_export(args) -> int:
    cfg = _load(args)
    di = cfg.discretized()
    warm = None
    if args.warm_start is not None:
        record = load_record(args.warm_start)
        warm = tuple((int(k), int(l)) for k, l in record["placement"]["cells"])
    model = build_milp_model(di, cfg.facilities, cfg.lost_cost)
    _write_out(args.out, write_lp(model, warm_start=warm))
    return 0


def _cmd_render(args) -> int:
    cfg = _load(args)
    record = load_record(args.solution)
    got = record.get("config_sha256")
    if got != cfg.fingerprint:
        raise ConfigError(
            f"{args.solution}: solution was produced from a different config "
            f"(fingerprint {got} != {cfg.fingerprint})"
        )
    placement = tuple((int(k), int(l)) for k, l in record["placement"]["cells"])
    di = cfg.discretized()
    svg = render_solution(
        di, cfg.facilities, cfg.lost_cost, placement, show_grid=args.show_grid
    )
    _write_out(args.out, svg)
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "evaluate": _cmd_evaluate,
    "export-milp": _cmd_export,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return _COMMANDS[args.command](args)
    except _REPORTED as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
