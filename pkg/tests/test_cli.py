import json

import numpy as np
import pytest

from gdq_atlas import cli
from gdq_atlas.cli import main, parse_args, report_run_id, run_scenario
from gdq_atlas.config import DEFAULT_SCENARIO, SCENARIO_DIR
from gdq_atlas.contracts.conventions import EXIT_LAW_FAILURE, EXIT_OK, EXIT_SCHEMA_ERROR
from gdq_atlas.pipeline.duckdb_store import get_law_reports, list_runs

SMALL_SAMPLER = {
    "samples": 20, "max_degree": 4, "series_samples": 4, "series_size": 2, "matricial_samples": 12,
    "max_size": 2, "positivity_trials": 40, "positivity_samples": 4,
}


@pytest.fixture
def small_scenario(tmp_path):
    scenario = json.loads(DEFAULT_SCENARIO.read_text(encoding="utf-8"))
    scenario["sampler"] = SMALL_SAMPLER
    path = tmp_path / "small.scn"
    path.write_text(json.dumps(scenario), encoding="utf-8")
    return path


def test_default_scenario_passes(small_scenario):
    result = run_scenario(small_scenario)
    assert result.error is None
    assert result.exit_code == EXIT_OK, [
        (s, r["law"]) for s, body in result.report["suites"].items() for r in body["laws"] if not r["passed"]
    ]
    report = result.report
    assert report["format"] == "gdq-report/1"
    assert report["scenario"] == "small.scn"
    assert sorted(report["suites"]) == sorted(report["timing"])
    assert len(report["suites"]) == 8


def test_suite_override_and_determinism(small_scenario):
    first = run_scenario(small_scenario, suites=["gdq", "fm"])
    second = run_scenario(small_scenario, suites=["fm", "gdq"])
    assert list(first.report["suites"]) == ["fm", "gdq"]
    assert report_run_id(first.report) == report_run_id(second.report)
    other = run_scenario(small_scenario, suites=["gdq", "fm"], seed=12345)
    assert other.report["seed"] == 12345
    assert report_run_id(other.report) != report_run_id(first.report)


def test_negative_weight_fails_with_witness():
    result = run_scenario(SCENARIO_DIR / "negative_weight.scn")
    assert result.exit_code == EXIT_LAW_FAILURE
    laws = {r["law"]: r for r in result.report["suites"]["dualpos"]["laws"]}
    assert laws["choi_identity"]["passed"] and laws["choi_transpose"]["passed"]
    failed = laws["dual_positive:u"]
    assert not failed["passed"]
    assert failed["witness"] is not None


def test_schema_errors(tmp_path):
    missing = run_scenario(tmp_path / "nope.scn")
    assert missing.exit_code == EXIT_SCHEMA_ERROR and missing.report == {}
    bad_json = tmp_path / "bad.scn"
    bad_json.write_text("{", encoding="utf-8")
    assert run_scenario(bad_json).exit_code == EXIT_SCHEMA_ERROR
    bad_format = tmp_path / "old.scn"
    bad_format.write_text(json.dumps({"format": "gdq-scenario/0", "seed": 1}), encoding="utf-8")
    result = run_scenario(bad_format)
    assert result.exit_code == EXIT_SCHEMA_ERROR
    assert "FormatVersionError" in result.error


def test_main_writes_report_and_ledger(small_scenario, tmp_path, capsys):
    out = tmp_path / "reports" / "gdq.json"
    db = tmp_path / "db" / "atlas.db"
    code = main([str(small_scenario), "--suite", "gdq", "--out", str(out), "--db", str(db)])
    assert code == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert list(report["suites"]) == ["gdq"]
    runs = list_runs(db)
    assert list(runs["run_id"]) == [report_run_id(report)]
    assert len(get_law_reports(run_id=runs.loc[0, "run_id"], db_path=db)) == len(report["suites"]["gdq"]["laws"])
    assert "mul_associativity" in capsys.readouterr().err


def test_main_reports_errors_on_one_line(tmp_path, capsys):
    code = main([str(tmp_path / "missing.scn")])
    assert code == EXIT_SCHEMA_ERROR
    err = capsys.readouterr().err.strip().splitlines()
    assert err[-1].startswith("gdq-atlas: ")


def test_parse_args():
    args = parse_args(["x.scn", "--suite", "dq", "--suite", "all", "--db"])
    assert args.suite == ["dq", "all"] and args.db.endswith("atlas.db")
    with pytest.raises(SystemExit):
        parse_args(["x.scn", "--suite", "bogus"])


def test_suite_exception_becomes_failed_law(small_scenario, monkeypatch):
    def singular(env):
        raise np.linalg.LinAlgError("Singular matrix")

    monkeypatch.setitem(cli.SUITE_RUNNERS, "gdq", singular)
    result = run_scenario(small_scenario, suites=["gdq", "fm"])
    assert result.error is None
    assert result.exit_code == EXIT_LAW_FAILURE
    broken = result.report["suites"]["gdq"]
    assert not broken["passed"]
    [law] = broken["laws"]
    assert law["law"] == "suite_error:gdq"
    assert law["defect"] == "inf"
    assert law["witness"] == {"error": "LinAlgError", "message": "Singular matrix"}
    assert result.report["suites"]["fm"]["passed"]
