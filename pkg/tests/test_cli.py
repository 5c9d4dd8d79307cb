import json
import math

import pytest

from plapeig.cli import (ScenarioConfig, builtin_scenarios, main,
                         run_checks)
from plapeig.geometry import flat_interval_model, line_exp_model


def fast_flat_config(tmp_path, **overrides):
    raw = {
        "space": flat_interval_model().to_dict(),
        "p": 2.0,
        "interval": [0.0, math.pi],
        "radii": [1.0, 2.0],
        "npoints": 501,
        "checks": ["picone"],
    }
    raw.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(raw))
    return path


class TestScenarioConfig:
    def test_builtins_load(self):
        for name, raw in builtin_scenarios().items():
            cfg = ScenarioConfig.from_dict(raw)
            assert cfg.p > 1.0
            assert cfg.interval[0] < cfg.interval[1]
            for c in cfg.checks:
                assert isinstance(c, str)

    def test_round_trip(self):
        raw = builtin_scenarios()["line-m3-p2"]
        cfg = ScenarioConfig.from_dict(raw)
        assert ScenarioConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()

    def test_unknown_check_rejected(self):
        raw = dict(builtin_scenarios()["interval-flat"])
        raw["checks"] = ["picone", "telepathy"]
        with pytest.raises(ValueError):
            ScenarioConfig.from_dict(raw)

    def test_defaults(self):
        raw = {
            "space": flat_interval_model().to_dict(),
            "p": 2.0,
            "interval": [0.0, 1.0],
        }
        cfg = ScenarioConfig.from_dict(raw)
        assert cfg.npoints == 2001
        assert cfg.tol_rel == 1e-6
        assert cfg.eps is None
        assert cfg.checks == []


class TestEigenCommand:
    def test_builtin_flat(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        code = main(["eigen", "--scenario", "interval-flat",
                     "--npoints", "501", "--out", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["schema"] == 1
        assert rep["command"] == "eigen"
        assert rep["eigen"]["converged"]
        assert abs(rep["eigen"]["lambda"] - 1.0) < 1e-3

    def test_config_file(self, tmp_path):
        cfgfile = fast_flat_config(tmp_path)
        out = tmp_path / "rep.json"
        assert main(["eigen", "--config", str(cfgfile), "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["config"]["npoints"] == 501

    def test_p_override_recorded(self, tmp_path):
        cfgfile = fast_flat_config(tmp_path)
        out = tmp_path / "rep.json"
        assert main(["eigen", "--config", str(cfgfile), "--p", "2.5",
                     "--out", str(out)]) == 0
        rep = json.loads(out.read_text())
        assert rep["config"]["p"] == 2.5

    def test_plot_data(self, tmp_path):
        out = tmp_path / "rep.json"
        plots = tmp_path / "plots"
        code = main(["eigen", "--scenario", "interval-flat",
                     "--npoints", "501", "--out", str(out),
                     "--plot-data", str(plots)])
        assert code == 0
        ratio = (plots / "gradient_ratio.tsv").read_text().splitlines()
        assert ratio[0].startswith("#")
        assert all(len(line.split("\t")) == 2 for line in ratio[1:])
        assert (plots / "gradient_bound.tsv").exists()

    def test_stdout_json(self, capsys):
        code = main(["eigen", "--scenario", "interval-flat",
                     "--npoints", "301"])
        assert code == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["version"]


class TestSweepCommand:
    def test_flat_sweep(self, tmp_path):
        out = tmp_path / "rep.json"
        plots = tmp_path / "plots"
        cfgfile = fast_flat_config(tmp_path, radii=[2.0, 4.0, 8.0])
        code = main(["sweep", "--config", str(cfgfile), "--out", str(out),
                     "--plot-data", str(plots)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["monotone_nonincreasing"]
        lams = [row["lambda"] for row in rep["sweep"]]
        assert lams == sorted(lams, reverse=True)
        table = (plots / "lambda_vs_R.tsv").read_text().splitlines()
        assert len(table) == 4  # header plus three radii

    def test_empty_radii_is_usage_error(self, tmp_path):
        cfgfile = fast_flat_config(tmp_path, radii=[])
        assert main(["sweep", "--config", str(cfgfile)]) == 1


class TestBoundsCommand:
    def test_classical(self, tmp_path):
        out = tmp_path / "rep.json"
        code = main(["bounds", "--p", "2", "--n", "3", "--m", "3",
                     "--lam", "0.75", "--out", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["bounds"]["lambda_max"] == pytest.approx(1.0)
        assert rep["bounds"]["sharp_y"] == pytest.approx(1.5, abs=1e-10)

    def test_overlarge_lambda_is_input_error(self, capsys):
        code = main(["bounds", "--p", "2", "--n", "3", "--m", "3",
                     "--lam", "5.0"])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestVerifyCommand:
    def test_flat_picone(self, tmp_path):
        cfgfile = fast_flat_config(tmp_path)
        out = tmp_path / "rep.json"
        code = main(["verify", "--config", str(cfgfile), "--out", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["all_passed"]
        assert rep["checks"][0]["name"] == "picone"
        assert rep["checks"][0]["status"] == "passed"

    def test_failing_check_exit_two(self, tmp_path):
        # global_sharp on a small truncated slab is known to exceed the
        # sharp root; the command must report the failure via exit code 2
        raw = {
            "space": line_exp_model(3, 3).to_dict(),
            "p": 2.0,
            "interval": [-4.0, 4.0],
            "npoints": 1001,
            "checks": ["global_sharp"],
        }
        cfgfile = tmp_path / "s.json"
        cfgfile.write_text(json.dumps(raw))
        out = tmp_path / "rep.json"
        code = main(["verify", "--config", str(cfgfile), "--out", str(out)])
        assert code == 2
        rep = json.loads(out.read_text())
        assert not rep["all_passed"]

    def test_no_checks_is_usage_error(self, tmp_path):
        cfgfile = fast_flat_config(tmp_path, checks=[])
        assert main(["verify", "--config", str(cfgfile)]) == 1

    def test_determinism(self, tmp_path):
        cfgfile = fast_flat_config(tmp_path)
        outs = []
        for k in range(2):
            out = tmp_path / f"rep{k}.json"
            assert main(["verify", "--config", str(cfgfile),
                         "--out", str(out)]) == 0
            rep = json.loads(out.read_text())
            rep.pop("timing")
            outs.append(json.dumps(rep, sort_keys=True))
        assert outs[0] == outs[1]


class TestUsageErrors:
    def test_unknown_scenario(self, capsys):
        assert main(["eigen", "--scenario", "nope"]) == 1
        assert "unknown scenario" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        assert main(["eigen", "--config", str(tmp_path / "missing.json")]) == 1

    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["eigen", "--config", str(bad)]) == 1

    def test_no_source_given(self):
        assert main(["eigen"]) == 1


class TestRunChecks:
    def test_line_scenario_all_pass(self):
        raw = dict(builtin_scenarios()["line-m3-p2"])
        raw["interval"] = [-4.0, 4.0]
        raw["npoints"] = 1001
        raw["radii"] = [2.0, 4.0]
        cfg = ScenarioConfig.from_dict(raw)
        reports = run_checks(cfg)
        assert len(reports) == len(cfg.checks)
        for rep in reports:
            if rep.hypothesis_ok:
                assert rep.passed, (rep.name, rep.measured, rep.bound)
