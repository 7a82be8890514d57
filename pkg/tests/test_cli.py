"""End-to-end checks of the dimfac command line."""

import json

import pytest

from dimfac.cli import main
from dimfac.config import loads_config
from dimfac.exact import build_milp_model, parse_lp

from helpers import config_dict

GRASP_SMALL = {"list_size": 3, "max_visits": 4, "seed": 3, "construction_retry_cap": 10}


def write_config(tmp_path, d, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


@pytest.fixture
def tiny_cfg(tmp_path):
    return write_config(tmp_path, config_dict())


@pytest.fixture
def mid_cfg(tmp_path):
    return write_config(tmp_path, config_dict(nx=8, ny=8, grasp=GRASP_SMALL), "mid.json")


def run_json(args, capsys):
    rc = main(args)
    out = capsys.readouterr().out
    return rc, json.loads(out)


class TestSolve:
    def test_exact_tiny(self, tiny_cfg, tmp_path):
        out = tmp_path / "sol.json"
        assert main(["solve", "--config", tiny_cfg, "--method", "exact", "--out", str(out)]) == 0
        rec = json.loads(out.read_text())
        assert rec["method"] == "exact"
        assert rec["placement"]["cells"] == [[0, 0], [0, 1]]
        assert rec["objective"]["total"] == pytest.approx(1.0, abs=1e-12)
        assert rec["solver_info"]["n_combinations"] == 16
        assert rec["config_sha256"] == loads_config(json.dumps(config_dict())).fingerprint

    def test_exact_to_stdout(self, tiny_cfg, capsys):
        rc, rec = run_json(["solve", "--config", tiny_cfg, "--method", "exact"], capsys)
        assert rc == 0
        assert rec["objective"]["total"] == pytest.approx(1.0, abs=1e-12)

    def test_grasp_mid(self, mid_cfg, tmp_path):
        out = tmp_path / "sol.json"
        assert main(["solve", "--config", mid_cfg, "--method", "grasp", "--out", str(out)]) == 0
        rec = json.loads(out.read_text())
        assert rec["method"] == "grasp"
        assert rec["seed"] == 3
        assert rec["objective"]["total"] == pytest.approx(1.0, abs=1e-9)
        assert rec["solver_info"]["constructions"] >= 3

    def test_seed_override(self, mid_cfg, tmp_path):
        out = tmp_path / "sol.json"
        assert main(["solve", "--config", mid_cfg, "--seed", "12", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["seed"] == 12

    def test_records_reproducible_and_thread_independent(self, mid_cfg, tmp_path):
        texts = []
        for name, extra in (("a", []), ("b", []), ("c", ["--threads", "4"])):
            out = tmp_path / f"{name}.json"
            assert main(extra + ["solve", "--config", mid_cfg, "--out", str(out)]) == 0
            rec = json.loads(out.read_text())
            rec.pop("timing")
            texts.append(json.dumps(rec, sort_keys=True))
        assert texts[0] == texts[1] == texts[2]


class TestEvaluate:
    def test_good_placement(self, tiny_cfg, capsys):
        rc, rec = run_json(
            ["evaluate", "--config", tiny_cfg, "--placement", "0,0;1,1"], capsys
        )
        assert rc == 0
        assert rec["method"] == "evaluate"
        assert rec["objective"]["total"] == pytest.approx(1.0, abs=1e-12)

    def test_overlapping_placement(self, tiny_cfg, capsys):
        rc = main(["evaluate", "--config", tiny_cfg, "--placement", "0,0;0,0"])
        err = capsys.readouterr().err
        assert rc == 1
        assert err.startswith("error:")
        assert "overlap" in err

    def test_wrong_entry_count(self, tiny_cfg, capsys):
        rc = main(["evaluate", "--config", tiny_cfg, "--placement", "0,0"])
        err = capsys.readouterr().err
        assert rc == 1
        assert "2 facilities" in err

    def test_malformed_entry(self, tiny_cfg, capsys):
        rc = main(["evaluate", "--config", tiny_cfg, "--placement", "a,b;0,0"])
        assert rc == 1
        assert "expected integers" in capsys.readouterr().err

    def test_out_of_grid_cell(self, tiny_cfg, capsys):
        rc = main(["evaluate", "--config", tiny_cfg, "--placement", "9,9;0,0"])
        err = capsys.readouterr().err
        assert rc == 1
        assert "feasible" in err


class TestErrors:
    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["solve", "--config", str(tmp_path / "nope.json")])
        assert rc == 1
        assert capsys.readouterr().err.startswith("error:")

    def test_invalid_config(self, tmp_path, capsys):
        p = write_config(tmp_path, {"region": 3})
        rc = main(["solve", "--config", p])
        err = capsys.readouterr().err
        assert rc == 1
        assert "region" in err

    def test_missing_required_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["solve"])
        assert exc.value.code == 2

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["refactor"])
        assert exc.value.code == 2

    def test_threads_must_be_positive(self, tiny_cfg):
        with pytest.raises(SystemExit) as exc:
            main(["--threads", "0", "solve", "--config", tiny_cfg])
        assert exc.value.code == 2


class TestExport:
    def test_export_counts_match_model(self, tiny_cfg, tmp_path, capsys):
        out = tmp_path / "m.lp"
        assert main(["export-milp", "--config", tiny_cfg, "--out", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("\\ discretized facility placement model")

        cfg = loads_config(json.dumps(config_dict()))
        di = cfg.discretized()
        model = build_milp_model(di, cfg.facilities, cfg.lost_cost)
        parsed = parse_lp(text)
        assert len(parsed.rows) == model.n_rows
        assert len(parsed.variables) == model.n_vars
        assert set(parsed.binaries) == set(model.binaries)

    def test_export_to_stdout(self, tiny_cfg, capsys):
        assert main(["export-milp", "--config", tiny_cfg]) == 0
        out = capsys.readouterr().out
        assert "Minimize" in out and "End" in out

    def test_warm_start_block(self, tiny_cfg, tmp_path):
        sol = tmp_path / "sol.json"
        main(["solve", "--config", tiny_cfg, "--method", "exact", "--out", str(sol)])
        out = tmp_path / "m.lp"
        assert main(
            ["export-milp", "--config", tiny_cfg, "--out", str(out), "--warm-start", str(sol)]
        ) == 0
        text = out.read_text()
        assert "warm start hint" in text
        assert "\\ t_000_000_000 = 1" in text
        assert "\\ t_001_000_001 = 1" in text

    def test_warm_start_needs_record(self, tiny_cfg, tmp_path, capsys):
        bogus = tmp_path / "b.json"
        bogus.write_text("{}")
        rc = main(
            ["export-milp", "--config", tiny_cfg, "--warm-start", str(bogus)]
        )
        assert rc == 1
        assert "placement" in capsys.readouterr().err


class TestRender:
    def solve(self, cfg, tmp_path, name="sol.json"):
        sol = tmp_path / name
        assert main(["solve", "--config", cfg, "--method", "exact", "--out", str(sol)]) == 0
        return str(sol)

    def test_svg_structure(self, tiny_cfg, tmp_path):
        sol = self.solve(tiny_cfg, tmp_path)
        out = tmp_path / "view.svg"
        assert main(
            ["render", "--config", tiny_cfg, "--solution", sol, "--out", str(out)]
        ) == 0
        svg = out.read_text()
        assert svg.startswith("<svg")
        assert svg.count('class="cell"') == 4
        assert svg.count('class="facility"') == 2
        assert svg.count('class="hatch"') == 2  # the two covered cells
        assert 'class="legend"' in svg
        assert "total cost" in svg
        assert 'class="grid"' not in svg

    def test_show_grid(self, tiny_cfg, tmp_path):
        sol = self.solve(tiny_cfg, tmp_path)
        out = tmp_path / "view.svg"
        args = ["render", "--config", tiny_cfg, "--solution", sol, "--out", str(out)]
        assert main(args + ["--show-grid"]) == 0
        assert 'class="grid"' in out.read_text()

    def test_byte_deterministic(self, tiny_cfg, tmp_path):
        sol = self.solve(tiny_cfg, tmp_path)
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        for out in (a, b):
            main(["render", "--config", tiny_cfg, "--solution", sol, "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()

    def test_config_mismatch_rejected(self, tiny_cfg, tmp_path, capsys):
        sol = self.solve(tiny_cfg, tmp_path)
        d = config_dict()
        d["facilities"][0]["access_cost"] = 0.005
        other = write_config(tmp_path, d, "other.json")
        rc = main(["render", "--config", other, "--solution", sol])
        err = capsys.readouterr().err
        assert rc == 1
        assert "fingerprint" in err
