import json
import os

import pytest

from orderlevel.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse(out):
    doc = json.loads(out)
    assert isinstance(doc, dict)
    return doc


def test_check_level_poset_exits_zero(capsys):
    code, out, err = run(capsys, "check", "fixtures/chain4.json")
    doc = parse(out)
    assert code == 0
    assert doc["verdict"] == "LEVEL"
    assert doc["certificates"]["subsets"]["level"] is True
    assert "LEVEL" in err


def test_check_not_level_exits_one(capsys):
    code, out, err = run(capsys, "check", "fixtures/fink.json", "--method", "all")
    doc = parse(out)
    assert code == 1
    assert doc["verdict"] == "NOT_LEVEL"
    for method in ("subsets", "condition_n", "brute_force"):
        assert doc["certificates"][method]["level"] is False
    assert doc["certificates"]["condition_n"]["r_max"] == 6


def test_json_flag_suppresses_summary(capsys):
    code, out, err = run(capsys, "--json", "check", "fixtures/chain4.json")
    assert code == 0 and err == ""
    code, out, err = run(capsys, "check", "fixtures/chain4.json", "--json")
    assert code == 0 and err == ""
    parse(out)


def test_reports_are_deterministic(capsys):
    _, out1, _ = run(capsys, "--json", "check", "fixtures/fink.json")
    _, out2, _ = run(capsys, "--json", "check", "fixtures/fink.json")
    d1, d2 = parse(out1), parse(out2)
    d1.pop("timing_seconds"), d2.pop("timing_seconds")
    assert d1 == d2


def test_report_envelope_fields(capsys):
    _, out, _ = run(capsys, "--json", "check", "fixtures/chain4.json")
    doc = parse(out)
    assert doc["command"] == ["check", "fixtures/chain4.json"]
    assert len(doc["input_sha256"]) == 64
    assert doc["version"]
    assert doc["timing_seconds"] >= 0


def test_ehrhart_command(capsys):
    code, out, _ = run(capsys, "--json", "ehrhart", "fixtures/chain2.json")
    doc = parse(out)
    assert code == 0
    assert doc["coefficients"] == ["1", "3/2", "1/2"]
    assert doc["values"] == ["1", "3", "6", "10"]


def test_hstar_command(capsys):
    code, out, _ = run(capsys, "--json", "hstar", "fixtures/antichain2.json")
    doc = parse(out)
    assert code == 0
    assert doc["hstar"] == [1, 1, 0]
    assert doc["codegree"] == 2
    _, out, _ = run(capsys, "--json", "hstar", "fixtures/fink.json")
    assert parse(out)["codegree"] == 5


def test_alcoved_check_box(capsys):
    code, out, _ = run(capsys, "--json", "alcoved", "fixtures/box21.json", "check", "--kmax", "6")
    doc = parse(out)
    assert code == 0
    assert doc["levelness"]["verdict"] == "LEVEL_UP_TO(6)"


def test_alcoved_check_poset_path(capsys):
    # poset documents are accepted and converted to their order polytope
    code, out, _ = run(capsys, "--json", "alcoved", "fixtures/fink.json", "check")
    doc = parse(out)
    assert code == 1
    assert doc["levelness"]["verdict"] == "NOT_LEVEL"
    assert doc["levelness"]["failed_k"] == 6
    assert doc["levelness"]["witness"] == [1, 2, 3, 4, 2, 3, 4, 1, 3, 4, 5]


def test_alcoved_points(capsys):
    code, out, _ = run(capsys, "--json", "alcoved", "fixtures/triangle.json", "points", "--k", "3")
    doc = parse(out)
    assert code == 0
    assert doc["count"] == 10 and len(doc["points"]) == 10


def test_alcoved_shrink(capsys):
    code, out, _ = run(capsys, "--json", "alcoved", "fixtures/box21.json", "shrink", "--k", "2")
    doc = parse(out)
    assert code == 0
    assert doc["empty"] is False
    code, out, _ = run(capsys, "--json", "alcoved", "fixtures/box21.json", "shrink")
    assert parse(out)["empty"] is True
    code, out, _ = run(capsys, "--json", "alcoved", "fixtures/triangle.json", "shrink")
    assert code == 2
    assert parse(out)["error"]


def test_product_command(capsys):
    code, out, _ = run(capsys, "--json", "product", "fixtures/counterexample.json", "--kmax", "4")
    doc = parse(out)
    assert code == 1
    assert doc["product_levelness"]["verdict"] == "NOT_LEVEL"
    assert doc["product_levelness"]["rule_applied"] is None
    assert doc["product_levelness"]["witness"] == [2, 2, 2, 1, 1]


def test_product_requires_two_factors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"product": [{"dim": 1, "bounds": [{"i": 1, "j": 0, "lo": 0, "hi": 1}]}]}))
    code, out, _ = run(capsys, "product", str(bad))
    assert code == 2
    assert parse(out)["error"]


def test_missing_file_and_malformed_json(tmp_path, capsys):
    code, out, _ = run(capsys, "check", str(tmp_path / "nope.json"))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, _ = run(capsys, "check", str(bad))
    assert code == 2
    assert parse(out)["error"]


def test_budget_env_override(capsys, monkeypatch):
    monkeypatch.setenv("ORDERLEVEL_BUDGET", "1")
    code, out, _ = run(capsys, "check", "fixtures/fink.json", "--method", "condition-n")
    assert code == 2
    assert parse(out)["error"] == "BudgetExceeded"
    monkeypatch.delenv("ORDERLEVEL_BUDGET")
    code, out, _ = run(
        capsys, "check", "fixtures/fink.json", "--method", "condition-n", "--budget", "2"
    )
    assert code == 2


def test_fixture_resolution_from_other_cwd(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "--json", "check", "fixtures/chain4.json")
    assert code == 0
    code, out, _ = run(capsys, "--json", "check", "chain4.json")
    assert code == 0


def test_local_file_shadows_fixture(tmp_path, monkeypatch, capsys):
    local = tmp_path / "chain4.json"
    local.write_text(json.dumps({"elements": ["1"], "covers": []}))
    monkeypatch.chdir(tmp_path)
    _, out, _ = run(capsys, "--json", "check", "chain4.json")
    doc = parse(out)
    assert doc["poset"]["size"] == 1


def test_verify_fixtures(capsys):
    code, out, _ = run(capsys, "--json", "verify-fixtures")
    doc = parse(out)
    assert code == 0
    assert len(doc["fixtures"]) == 8
    assert set(doc["fixtures"].values()) == {"ok"}


def test_usage_error_exits_two(capsys):
    assert main(["check"]) == 2
    assert main(["frobnicate", "x"]) == 2
    assert main([]) == 2
