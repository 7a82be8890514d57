"""JSON config loading, fingerprints, and solution records."""

import copy
import json

import pytest

from dimfac.config import (
    ConfigError,
    dump_record,
    load_record,
    loads_config,
    solution_record,
)
from dimfac.exact import enumerate_exact

from helpers import config_dict


def load(d):
    return loads_config(json.dumps(d))


class TestLoad:
    def test_round_trip_fields(self):
        cfg = load(config_dict())
        assert cfg.grid.nx == 2 and cfg.grid.ny == 2
        assert cfg.quad_order == 4
        assert cfg.eps == 1e-9
        assert len(cfg.facilities) == 2
        assert cfg.facilities[0].name == "first"
        assert cfg.facilities[1].access_cost == 0.1
        assert cfg.facilities[0].utility.kind == "norm_to_root"
        assert cfg.lost_cost.breakpoints == ((0.0, 0.0), (4.0, 4.0))
        assert cfg.grasp_params.list_size == 50  # default when solver absent
        assert cfg.exact_limit == 10_000_000

    def test_expr_curve_matches_breakpoints(self):
        # "t" sampled at 2 points over [0, 4] is the same line as the
        # explicit breakpoint list, so the normalized forms must agree
        d = config_dict()
        d["lost_cost"] = {"expr": "t", "lo": 0, "hi": 4, "samples": 2}
        assert load(d).fingerprint == load(config_dict()).fingerprint

    def test_normalization_is_idempotent(self):
        d = config_dict(grasp={"list_size": 5, "seed": 9})
        d["facilities"][1]["utility"]["norm"] = {"kind": "weighted_l2", "wx": 2, "wy": 0.5}
        cfg = load(d)
        again = load(cfg.normalized)
        assert again.fingerprint == cfg.fingerprint
        assert again.normalized == cfg.normalized

    def test_normalized_materializes_defaults(self):
        norm = load(config_dict()).normalized
        assert norm["quad_order"] == 4
        assert norm["solver"]["grasp"]["list_size"] == 50
        assert norm["solver"]["exact"]["limit"] == 10_000_000
        assert norm["grid"]["bbox"] == [0.0, 0.0, 1.0, 1.0]

    def test_bbox_override(self):
        d = config_dict()
        d["grid"]["bbox"] = [0.0, 0.0, 2.0, 2.0]
        cfg = load(d)
        assert cfg.grid.bbox.x_hi == 2.0

    def test_discretized_solves(self):
        cfg = load(config_dict())
        di = cfg.discretized()
        res = enumerate_exact(di, cfg.facilities, cfg.lost_cost, limit=cfg.exact_limit)
        assert res.evaluation.total == pytest.approx(1.0, abs=1e-12)


class TestFingerprint:
    def test_shape(self):
        fp = load(config_dict()).fingerprint
        assert len(fp) == 64
        assert all(c in "0123456789abcdef" for c in fp)

    def test_seed_does_not_change_it(self):
        a = load(config_dict(grasp={"seed": 1})).fingerprint
        b = load(config_dict(grasp={"seed": 2})).fingerprint
        assert a == b

    def test_solver_knobs_do_change_it(self):
        a = load(config_dict(grasp={"list_size": 8})).fingerprint
        b = load(config_dict(grasp={"list_size": 9})).fingerprint
        assert a != b

    def test_instance_content_changes_it(self):
        d = config_dict()
        d["facilities"][1]["access_cost"] = 0.2
        assert load(d).fingerprint != load(config_dict()).fingerprint


class TestErrors:
    def test_bad_json(self):
        with pytest.raises(ConfigError, match="not valid JSON"):
            loads_config("{nope")

    def test_missing_region(self):
        d = config_dict()
        del d["region"]
        with pytest.raises(ConfigError, match="region: required field is missing"):
            load(d)

    def test_unknown_top_level_field(self):
        d = config_dict()
        d["solvr"] = {}
        with pytest.raises(ConfigError, match="solvr: unknown field"):
            load(d)

    def test_clockwise_region(self):
        d = config_dict()
        d["region"] = list(reversed(d["region"]))
        with pytest.raises(ConfigError, match="region: .*counter-clockwise"):
            load(d)

    def test_bad_grid_size(self):
        d = config_dict()
        d["grid"]["nx"] = 0
        with pytest.raises(ConfigError, match="grid.nx: expected an integer >= 1"):
            load(d)

    def test_bad_utility_kind(self):
        d = config_dict()
        d["facilities"][0]["utility"]["kind"] = "teleport"
        with pytest.raises(ConfigError, match=r"facilities\[0\].utility.kind: expected one of"):
            load(d)

    def test_norm_required_for_norm_kinds(self):
        d = config_dict()
        del d["facilities"][1]["utility"]["norm"]
        with pytest.raises(ConfigError, match=r"facilities\[1\].utility.norm: required field"):
            load(d)

    def test_norm_rejected_for_gauge(self):
        d = config_dict()
        d["facilities"][0]["utility"]["kind"] = "gauge"
        with pytest.raises(ConfigError, match="not used for gauge"):
            load(d)

    def test_vertex_utility_needs_polygon(self):
        d = config_dict()
        d["facilities"][0]["shape"] = {"kind": "ellipse", "a": 0.05, "b": 0.05}
        d["facilities"][0]["utility"]["kind"] = "max_distance"
        with pytest.raises(ConfigError, match=r"facilities\[0\]"):
            load(d)

    def test_decreasing_curve(self):
        d = config_dict()
        d["lost_cost"] = {"breakpoints": [[0, 0], [0, 1]]}
        with pytest.raises(ConfigError, match="lost_cost"):
            load(d)

    def test_bad_density_expression(self):
        d = config_dict()
        d["demand_density"] = "x + unknown"
        with pytest.raises(ConfigError, match="demand_density"):
            load(d)

    def test_unknown_grasp_field(self):
        with pytest.raises(ConfigError, match="solver.grasp.flub: unknown field"):
            load(config_dict(grasp={"flub": 3}))

    def test_bad_grasp_value(self):
        with pytest.raises(ConfigError, match="solver.grasp: .*growth_step"):
            load(config_dict(grasp={"growth_step": 0.3}))


class TestRecords:
    def make(self, seconds):
        cfg = load(config_dict())
        di = cfg.discretized()
        res = enumerate_exact(di, cfg.facilities, cfg.lost_cost, limit=cfg.exact_limit)
        return solution_record(
            cfg, di, res.placement, res.evaluation, "exact", seconds,
            solver_info={"n_combinations": res.n_combinations},
        )

    def test_record_contents(self):
        rec = self.make(0.5)
        assert rec["format"] == "dimfac-solution-1"
        assert rec["method"] == "exact"
        assert rec["placement"]["cells"] == [[0, 0], [0, 1]]
        assert rec["objective"]["total"] == pytest.approx(1.0, abs=1e-12)
        assert rec["masses"]["lost"] + sum(rec["masses"]["assigned"]) == pytest.approx(
            1.0, abs=1e-12
        )
        assert rec["config_sha256"] == load(config_dict()).fingerprint

    def test_dump_stable_modulo_timing(self):
        a = json.loads(dump_record(self.make(0.1)))
        b = json.loads(dump_record(self.make(7.7)))
        a.pop("timing")
        b.pop("timing")
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_load_record_rejects_non_record(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text(json.dumps({"hello": 1}))
        with pytest.raises(ConfigError, match="missing 'placement'"):
            load_record(str(p))

    def test_deep_copy_of_input_not_required(self):
        # loads_config must not mutate the caller's dict
        d = config_dict()
        before = copy.deepcopy(d)
        load(d)
        assert d == before
