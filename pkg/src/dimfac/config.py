"""JSON instance configs and solution records.

A config fully describes an instance: region polygon, grid, densities,
facility shapes, utilities and cost curves, plus optional solver settings.
`load_config` validates with field-path error messages and normalizes
everything (cost expressions are sampled into breakpoints), so two configs
meaning the same instance hash identically via `config_fingerprint`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import expr
from .costs import InvalidCostCurveError, PiecewiseLinear, pl_from_expr
from .evaluate import Evaluation, Facility, UtilitySpec
from .exact import ENUMERATION_LIMIT
from .geometry import (
    Ellipse,
    GeometryError,
    InvalidShapeError,
    Norm,
    Point,
    Polygon,
    Rect,
    RegionPolygon,
    Shape,
)
from .grasp import GraspParams
from .grid import DiscretizedInstance, Grid, Placement, discretize

__all__ = [
    "ConfigError",
    "InstanceConfig",
    "load_config",
    "loads_config",
    "config_fingerprint",
    "solution_record",
    "dump_record",
    "load_record",
]


class ConfigError(ValueError):
    """Invalid config content; the message starts with the field path."""


def _fail(path: str, msg: str) -> None:
    raise ConfigError(f"{path}: {msg}")


def _require_keys(d: dict, path: str, known: set[str]) -> None:
    for key in d:
        if key not in known:
            _fail(f"{path}.{key}" if path else key, "unknown field")


def _get(d: dict, path: str, key: str, required: bool = True, default=None):
    if key not in d:
        if required:
            _fail(f"{path}.{key}" if path else key, "required field is missing")
        return default
    return d[key]


def _number(value, path: str, positive: bool = False, nonneg: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    v = float(value)
    if positive and not v > 0:
        _fail(path, f"expected a positive number, got {value!r}")
    if nonneg and v < 0:
        _fail(path, f"expected a non-negative number, got {value!r}")
    return v


def _integer(value, path: str, lo: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        _fail(path, f"expected an integer >= {lo}, got {value}")
    return value


def _point_list(value, path: str) -> list[list[float]]:
    if not isinstance(value, list) or len(value) < 3:
        _fail(path, "expected a list of at least 3 [x, y] pairs")
    out = []
    for idx, item in enumerate(value):
        if not isinstance(item, list) or len(item) != 2:
            _fail(f"{path}[{idx}]", f"expected an [x, y] pair, got {item!r}")
        out.append([
            _number(item[0], f"{path}[{idx}][0]"),
            _number(item[1], f"{path}[{idx}][1]"),
        ])
    return out


def _parse_expr(text, path: str, variables: tuple[str, ...]):
    if not isinstance(text, str):
        _fail(path, f"expected an expression string, got {text!r}")
    try:
        return expr.parse(text, variables)
    except expr.ExprError as err:
        _fail(path, f"bad expression: {err}")


def _parse_curve(value, path: str) -> PiecewiseLinear:
    if not isinstance(value, dict):
        _fail(path, f"expected an object with 'breakpoints' or 'expr', got {value!r}")
    if "breakpoints" in value:
        _require_keys(value, path, {"breakpoints"})
        bps = value["breakpoints"]
        if not isinstance(bps, list):
            _fail(f"{path}.breakpoints", "expected a list of [omega, value] pairs")
        pairs = []
        for idx, item in enumerate(bps):
            if not isinstance(item, list) or len(item) != 2:
                _fail(f"{path}.breakpoints[{idx}]", f"expected an [omega, value] pair, got {item!r}")
            pairs.append((
                _number(item[0], f"{path}.breakpoints[{idx}][0]"),
                _number(item[1], f"{path}.breakpoints[{idx}][1]"),
            ))
        try:
            return PiecewiseLinear(tuple(pairs))
        except InvalidCostCurveError as err:
            _fail(f"{path}.breakpoints", str(err))
    if "expr" in value:
        _require_keys(value, path, {"expr", "lo", "hi", "samples"})
        e = _parse_expr(value["expr"], f"{path}.expr", ("t",))
        lo = _number(_get(value, path, "lo"), f"{path}.lo")
        hi = _number(_get(value, path, "hi"), f"{path}.hi")
        samples = _integer(_get(value, path, "samples", required=False, default=5), f"{path}.samples", lo=2)
        if not hi > lo:
            _fail(f"{path}.hi", f"expected hi > lo, got lo={lo} hi={hi}")
        omegas = [float(w) for w in np.linspace(lo, hi, samples)]
        try:
            return pl_from_expr(e, omegas)
        except InvalidCostCurveError as err:
            _fail(f"{path}.expr", str(err))
    _fail(path, "expected either 'breakpoints' or 'expr'")


def _parse_norm(value, path: str) -> Norm:
    if not isinstance(value, dict):
        _fail(path, f"expected an object with a 'kind', got {value!r}")
    kind = _get(value, path, "kind")
    if kind == "weighted_l2":
        _require_keys(value, path, {"kind", "wx", "wy"})
        return Norm.weighted_l2(
            _number(_get(value, path, "wx"), f"{path}.wx", positive=True),
            _number(_get(value, path, "wy"), f"{path}.wy", positive=True),
        )
    _require_keys(value, path, {"kind"})
    if kind == "l1":
        return Norm.l1()
    if kind == "l2":
        return Norm.l2()
    if kind == "linf":
        return Norm.linf()
    _fail(f"{path}.kind", f"expected one of l1, l2, linf, weighted_l2, got {kind!r}")


def _parse_shape(value, path: str) -> Shape:
    if not isinstance(value, dict):
        _fail(path, f"expected an object with a 'kind', got {value!r}")
    kind = _get(value, path, "kind")
    if kind == "polygon":
        _require_keys(value, path, {"kind", "vertices"})
        pts = _point_list(_get(value, path, "vertices"), f"{path}.vertices")
        try:
            return Polygon(tuple(Point(x, y) for x, y in pts))
        except InvalidShapeError as err:
            _fail(f"{path}.vertices", str(err))
    if kind == "ellipse":
        _require_keys(value, path, {"kind", "a", "b"})
        try:
            return Ellipse(
                _number(_get(value, path, "a"), f"{path}.a", positive=True),
                _number(_get(value, path, "b"), f"{path}.b", positive=True),
            )
        except InvalidShapeError as err:
            _fail(path, str(err))
    _fail(f"{path}.kind", f"expected 'polygon' or 'ellipse', got {kind!r}")


_UTILITY_KINDS = ("norm_to_root", "gauge", "max_distance")


def _parse_facility(value, path: str) -> Facility:
    if not isinstance(value, dict):
        _fail(path, f"expected a facility object, got {value!r}")
    _require_keys(
        value,
        path,
        {"name", "shape", "access_cost", "utility", "install_cost", "congestion_cost"},
    )
    shape = _parse_shape(_get(value, path, "shape"), f"{path}.shape")
    access = _number(_get(value, path, "access_cost"), f"{path}.access_cost", nonneg=True)
    uval = _get(value, path, "utility")
    upath = f"{path}.utility"
    if not isinstance(uval, dict):
        _fail(upath, f"expected an object, got {uval!r}")
    _require_keys(uval, upath, {"kind", "scale", "norm", "clamped"})
    kind = _get(uval, upath, "kind")
    if kind not in _UTILITY_KINDS:
        _fail(f"{upath}.kind", f"expected one of {', '.join(_UTILITY_KINDS)}, got {kind!r}")
    scale = _parse_expr(_get(uval, upath, "scale"), f"{upath}.scale", ("t",))
    norm = None
    if kind in ("norm_to_root", "max_distance"):
        nval = _get(uval, upath, "norm")
        norm = _parse_norm(nval, f"{upath}.norm")
    elif "norm" in uval:
        _fail(f"{upath}.norm", "not used for gauge utilities")
    clamped = _get(uval, upath, "clamped", required=False, default=True)
    if not isinstance(clamped, bool):
        _fail(f"{upath}.clamped", f"expected true or false, got {clamped!r}")
    name = _get(value, path, "name", required=False, default="")
    if not isinstance(name, str):
        _fail(f"{path}.name", f"expected a string, got {name!r}")
    install_curve = _parse_curve(_get(value, path, "install_cost"), f"{path}.install_cost")
    congestion_curve = _parse_curve(
        _get(value, path, "congestion_cost"), f"{path}.congestion_cost"
    )
    try:
        return Facility(
            shape=shape,
            access_cost=access,
            utility=UtilitySpec(kind=kind, scale=scale, norm=norm, clamped=clamped),
            install_cost=install_curve,
            congestion_cost=congestion_curve,
            name=name,
        )
    except (ValueError, TypeError, GeometryError) as err:
        _fail(path, str(err))


_GRASP_FIELDS = {
    "list_size",
    "permute_count",
    "growth_step",
    "push_step",
    "redirect_cap",
    "push_repeats",
    "search_radius_k",
    "search_radius_l",
    "epsilon_ball",
    "max_visits",
    "stop_on_clean_pass",
    "restart_cap",
    "root_sample_cap",
    "construction_retry_cap",
    "seed",
}


@dataclass(frozen=True)
class InstanceConfig:
    region: RegionPolygon
    grid: Grid
    quad_order: int
    eps: float
    demand_density: Any
    install_density: Any
    lost_cost: PiecewiseLinear
    facilities: tuple[Facility, ...]
    grasp_params: GraspParams
    exact_limit: int
    normalized: dict

    @property
    def fingerprint(self) -> str:
        return config_fingerprint(self)

    def discretized(self) -> DiscretizedInstance:
        return discretize(
            self.region,
            self.grid,
            tuple(f.shape for f in self.facilities),
            self.demand_density,
            self.install_density,
            quad_order=self.quad_order,
            eps=self.eps,
        )


def loads_config(text: str) -> InstanceConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"not valid JSON: {err}") from err
    return _from_raw(raw)


def load_config(path: str) -> InstanceConfig:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return loads_config(text)


def _from_raw(raw) -> InstanceConfig:
    if not isinstance(raw, dict):
        raise ConfigError("top level: expected a JSON object")
    _require_keys(
        raw,
        "",
        {
            "region",
            "grid",
            "quad_order",
            "eps",
            "demand_density",
            "install_density",
            "lost_cost",
            "facilities",
            "solver",
        },
    )
    pts = _point_list(_get(raw, "", "region"), "region")
    try:
        region = RegionPolygon(tuple(Point(x, y) for x, y in pts))
    except InvalidShapeError as err:
        _fail("region", str(err))

    gval = _get(raw, "", "grid")
    if not isinstance(gval, dict):
        _fail("grid", f"expected an object, got {gval!r}")
    _require_keys(gval, "grid", {"nx", "ny", "bbox"})
    nx = _integer(_get(gval, "grid", "nx"), "grid.nx", lo=1)
    ny = _integer(_get(gval, "grid", "ny"), "grid.ny", lo=1)
    bval = _get(gval, "grid", "bbox", required=False)
    if bval is None:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        bbox = Rect(min(xs), min(ys), max(xs), max(ys))
    else:
        if not isinstance(bval, list) or len(bval) != 4:
            _fail("grid.bbox", f"expected [x_lo, y_lo, x_hi, y_hi], got {bval!r}")
        vals = [_number(v, f"grid.bbox[{i}]") for i, v in enumerate(bval)]
        if not (vals[2] > vals[0] and vals[3] > vals[1]):
            _fail("grid.bbox", "expected x_hi > x_lo and y_hi > y_lo")
        bbox = Rect(*vals)
    grid = Grid(bbox, nx, ny)

    quad_order = _integer(_get(raw, "", "quad_order", required=False, default=4), "quad_order", lo=1)
    eps = _number(_get(raw, "", "eps", required=False, default=1e-9), "eps", positive=True)
    demand = _parse_expr(_get(raw, "", "demand_density"), "demand_density", ("x", "y"))
    install = _parse_expr(_get(raw, "", "install_density"), "install_density", ("x", "y"))
    lost = _parse_curve(_get(raw, "", "lost_cost"), "lost_cost")

    fvals = _get(raw, "", "facilities")
    if not isinstance(fvals, list) or not fvals:
        _fail("facilities", "expected a non-empty list")
    facilities = tuple(
        _parse_facility(fv, f"facilities[{idx}]") for idx, fv in enumerate(fvals)
    )

    sval = _get(raw, "", "solver", required=False, default={})
    if not isinstance(sval, dict):
        _fail("solver", f"expected an object, got {sval!r}")
    _require_keys(sval, "solver", {"grasp", "exact"})
    gp = sval.get("grasp", {})
    if not isinstance(gp, dict):
        _fail("solver.grasp", f"expected an object, got {gp!r}")
    _require_keys(gp, "solver.grasp", _GRASP_FIELDS)
    try:
        grasp_params = GraspParams(**gp)
    except (TypeError, ValueError) as err:
        _fail("solver.grasp", str(err))
    ex = sval.get("exact", {})
    if not isinstance(ex, dict):
        _fail("solver.exact", f"expected an object, got {ex!r}")
    _require_keys(ex, "solver.exact", {"limit"})
    exact_limit = _integer(
        ex.get("limit", ENUMERATION_LIMIT), "solver.exact.limit", lo=1
    )

    cfg = InstanceConfig(
        region=region,
        grid=grid,
        quad_order=quad_order,
        eps=eps,
        demand_density=demand,
        install_density=install,
        lost_cost=lost,
        facilities=facilities,
        grasp_params=grasp_params,
        exact_limit=exact_limit,
        normalized={},
    )
    object.__setattr__(cfg, "normalized", _normalize(cfg, raw))
    return cfg


def _curve_dict(curve: PiecewiseLinear) -> dict:
    return {"breakpoints": [[w, v] for w, v in curve.breakpoints]}


def _normalize(cfg: InstanceConfig, raw: dict) -> dict:
    facs = []
    for f in cfg.facilities:
        if isinstance(f.shape, Ellipse):
            shape = {"kind": "ellipse", "a": f.shape.a, "b": f.shape.b}
        else:
            shape = {
                "kind": "polygon",
                "vertices": [[p.x, p.y] for p in f.shape.vertices],
            }
        norm = None
        if f.utility.norm is not None:
            norm = {"kind": f.utility.norm.kind}
            if f.utility.norm.kind == "weighted_l2":
                norm["wx"] = f.utility.norm.wx
                norm["wy"] = f.utility.norm.wy
        facs.append(
            {
                "name": f.name,
                "shape": shape,
                "access_cost": f.access_cost,
                "utility": {
                    "kind": f.utility.kind,
                    "scale": expr.unparse(f.utility.scale),
                    "norm": norm,
                    "clamped": f.utility.clamped,
                },
                "install_cost": _curve_dict(f.install_cost),
                "congestion_cost": _curve_dict(f.congestion_cost),
            }
        )
    gp = cfg.grasp_params
    return {
        "region": [[p.x, p.y] for p in cfg.region.vertices],
        "grid": {
            "nx": cfg.grid.nx,
            "ny": cfg.grid.ny,
            "bbox": [
                cfg.grid.bbox.x_lo,
                cfg.grid.bbox.y_lo,
                cfg.grid.bbox.x_hi,
                cfg.grid.bbox.y_hi,
            ],
        },
        "quad_order": cfg.quad_order,
        "eps": cfg.eps,
        "demand_density": expr.unparse(cfg.demand_density),
        "install_density": expr.unparse(cfg.install_density),
        "lost_cost": _curve_dict(cfg.lost_cost),
        "facilities": facs,
        "solver": {
            "grasp": {
                "list_size": gp.list_size,
                "permute_count": gp.permute_count,
                "growth_step": gp.growth_step,
                "push_step": gp.push_step,
                "redirect_cap": gp.redirect_cap,
                "push_repeats": gp.push_repeats,
                "search_radius_k": gp.search_radius_k,
                "search_radius_l": gp.search_radius_l,
                "epsilon_ball": gp.epsilon_ball,
                "max_visits": gp.max_visits,
                "stop_on_clean_pass": gp.stop_on_clean_pass,
                "restart_cap": gp.restart_cap,
                "root_sample_cap": gp.root_sample_cap,
                "construction_retry_cap": gp.construction_retry_cap,
                "seed": gp.seed,
            },
            "exact": {"limit": cfg.exact_limit},
        },
    }


def config_fingerprint(cfg: InstanceConfig) -> str:
    """sha256 over the canonical normalized config (solver seed excluded)."""
    norm = json.loads(json.dumps(cfg.normalized))
    norm["solver"]["grasp"].pop("seed", None)
    blob = json.dumps(norm, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# solution records


def solution_record(
    cfg: InstanceConfig,
    di: DiscretizedInstance,
    placement: Placement,
    evaluation: Evaluation,
    method: str,
    seconds: float,
    seed: int | None = None,
    solver_info: dict | None = None,
) -> dict:
    alloc = evaluation.allocation
    return {
        "format": "dimfac-solution-1",
        "config_sha256": cfg.fingerprint,
        "method": method,
        "seed": seed,
        "placement": {
            "cells": [[int(k), int(l)] for k, l in placement],
            "centers": [
                [di.grid.cell_center(tuple(at)).x, di.grid.cell_center(tuple(at)).y]
                for at in placement
            ],
        },
        "objective": {
            "total": evaluation.total,
            "install_costs": list(evaluation.install_costs),
            "congestion_costs": list(evaluation.congestion_costs),
            "lost_cost": evaluation.lost_cost_value,
        },
        "masses": {
            "assigned": list(alloc.assigned_mass),
            "install": list(alloc.install_mass),
            "lost": alloc.lost_mass,
        },
        "solver_info": solver_info or {},
        "timing": {"seconds": seconds},
    }


def dump_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def load_record(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            record = json.load(fh)
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: not valid JSON: {err}") from err
    if not isinstance(record, dict) or "placement" not in record:
        raise ConfigError(f"{path}: not a solution record (missing 'placement')")
    return record
