import pytest

from gdq_atlas.contracts.validate import MissingColumnsError
from gdq_atlas.laws.report import DefectTracker, LawReport, reports_to_frame
from gdq_atlas.pipeline.duckdb_store import (
    get_law_reports, get_table_info, init_db, list_runs, list_tables, save_law_reports, save_run,
)


@pytest.fixture
def db(tmp_path):
    path = tmp_path / "db" / "atlas.db"
    init_db(path)
    return path


def frame(run_id, defect=0.0):
    reports = [
        DefectTracker("leibniz", 0.0).report(),
        LawReport("coassociativity", 3, defect, 0.0, defect == 0.0, witness={"p": "X0"}),
    ]
    return reports_to_frame(reports, suite="gdq").assign(run_id=run_id)


def test_tables_created(db):
    assert sorted(list_tables(db)) == ["law_report", "scenario_run"]
    info = get_table_info("law_report", db)
    assert "witness" in set(info["column_name"])


def test_save_and_query(db):
    save_run({"run_id": "r1", "scenario": "a.scn", "seed": 1, "suites": "gdq", "passed": False,
              "format": "gdq-report/1"}, db)
    save_law_reports(frame("r1", defect=2.0), db_path=db)
    runs = list_runs(db)
    assert list(runs["run_id"]) == ["r1"]
    failed = get_law_reports(run_id="r1", failed_only=True, db_path=db)
    assert list(failed["law"]) == ["coassociativity"]
    assert failed.loc[0, "defect"] == 2.0


def test_replace_overwrites_by_key(db):
    save_law_reports(frame("r1", defect=2.0), db_path=db)
    save_law_reports(frame("r1"), replace=True, db_path=db)
    df = get_law_reports(run_id="r1", db_path=db)
    assert len(df) == 2 and df["passed"].all()
    save_run({"run_id": "r1", "seed": 1, "passed": True}, db)
    save_run({"run_id": "r1", "seed": 2, "passed": True}, db)
    assert list(list_runs(db)["seed"]) == [2]


def test_bad_frame_rejected(db):
    with pytest.raises(MissingColumnsError):
        save_law_reports(frame("r1").drop(columns=["law"]), db_path=db)
