import copy
import json

import pandas as pd
import pytest

from gdq_atlas.config import DEFAULT_SCENARIO
from gdq_atlas.contracts.conventions import SUITE_NAMES, decode_matrix, encode_matrix
from gdq_atlas.contracts.schema import LAW_REPORT, SCENARIO_RUN, get_table
from gdq_atlas.contracts.validate import (
    CapExceededError, FormatVersionError, MatrixFormatError, MissingColumnsError, MissingFieldsError,
    UnknownNameError, ValidationError, normalize_suites, quick_validate_scenario, validate_report_frame,
)


@pytest.fixture
def scenario():
    return json.loads(DEFAULT_SCENARIO.read_text(encoding="utf-8"))


def test_default_scenario_is_valid(scenario):
    out = quick_validate_scenario(scenario)
    assert out["suites"] == sorted(SUITE_NAMES)
    assert out["sampler"]["samples"] == 200
    assert out["tolerances"]["loose"] == 1e-9
    assert scenario["suites"] == ["all"]


def test_minimal_scenario_gets_defaults():
    out = quick_validate_scenario({"format": "gdq-scenario/1", "seed": 7})
    assert out["context"] == {"q": 2, "n": 2, "order": 6}
    assert out["suites"] == sorted(SUITE_NAMES)


def test_normalize_suites():
    assert normalize_suites("fm") == ["fm"]
    assert normalize_suites(["utransform", "fm", "fm"]) == ["fm", "utransform"]
    assert normalize_suites([]) == sorted(SUITE_NAMES)
    with pytest.raises(UnknownNameError) as err:
        normalize_suites(["gdq", "nope"])
    assert err.value.name == "nope"


@pytest.mark.parametrize("mutate, error", [
    (lambda s: s.pop("seed"), MissingFieldsError),
    (lambda s: s.update(format="gdq-scenario/0"), FormatVersionError),
    (lambda s: s.update(seed=-1), ValidationError),
    (lambda s: s["context"].update(order=99), CapExceededError),
    (lambda s: s["context"].update(q=True), ValidationError),
    (lambda s: s["site"].update(y=[[[1, 0], [0, 0]]]), MatrixFormatError),
    (lambda s: s["site"]["basis"][0][0].pop(), MatrixFormatError),
    (lambda s: s["functions"].append({"label": "x", "kind": "spline"}), UnknownNameError),
    (lambda s: s["functions"].append({"label": "square", "kind": "resolvent"}), ValidationError),
    (lambda s: s["functions"][0].update(rule="exp"), UnknownNameError),
    (lambda s: s["functions"][0]["region"].update(kind="annulus"), UnknownNameError),
    (lambda s: s.pop("functional"), MissingFieldsError),
    (lambda s: s.update(sampler={"speed": 3}), UnknownNameError),
    (lambda s: s.update(sampler={"max_size": 50}), CapExceededError),
    (lambda s: s.update(tolerances={"loose": -1}), ValidationError),
    (lambda s: s.update(suites=["everything"]), UnknownNameError),
])
def test_bad_scenarios(scenario, mutate, error):
    broken = copy.deepcopy(scenario)
    mutate(broken)
    with pytest.raises(error):
        quick_validate_scenario(broken)


def test_site_is_required_for_site_functions(scenario):
    broken = {k: v for k, v in scenario.items() if k not in ("site", "functional")}
    with pytest.raises(MissingFieldsError) as err:
        quick_validate_scenario(broken)
    assert err.value.missing == {"site"}


def test_matrix_codec():
    m = decode_matrix([[[1, 2], 3], [[0, -1], [0.5, 0]]])
    assert m[0, 0] == 1 + 2j and m[0, 1] == 3 and m[1, 0] == -1j
    assert decode_matrix(encode_matrix(m)).tolist() == m.tolist()
    with pytest.raises(ValueError):
        decode_matrix([[[1, 0]], [[1, 0], [2, 0]]])
    with pytest.raises(ValueError):
        decode_matrix([])


def test_report_frame_columns():
    df = pd.DataFrame([{
        "run_id": "r1", "suite": "gdq", "law": "leibniz", "statement": "", "samples": 3,
        "defect": 0.0, "tolerance": 0.0, "passed": True, "witness": None, "extra": 1,
    }])
    out = validate_report_frame(df)
    assert list(out.columns)[:3] == ["run_id", "suite", "law"]
    assert "extra" not in out.columns
    with pytest.raises(MissingColumnsError) as err:
        validate_report_frame(df.drop(columns=["defect"]))
    assert err.value.missing == {"defect"}
    with pytest.raises(ValidationError):
        validate_report_frame(df.assign(run_id=None))


def test_ledger_schema_sql():
    assert "created_at" not in LAW_REPORT.required_columns()
    assert "run_id VARCHAR NOT NULL PRIMARY KEY" in SCENARIO_RUN.duckdb_create_sql()
    assert "PRIMARY KEY (run_id, suite, law)" in LAW_REPORT.duckdb_create_sql()
    assert "DEFAULT CURRENT_TIMESTAMP" in LAW_REPORT.duckdb_create_sql()
    assert LAW_REPORT.delete_by_key_sql("tmp_df").endswith("(SELECT run_id, suite, law FROM tmp_df)")
    assert LAW_REPORT.insert_sql("tmp_df", ["run_id", "law"]) == (
        "INSERT INTO law_report (run_id, law) SELECT run_id, law FROM tmp_df"
    )
    with pytest.raises(ValueError):
        LAW_REPORT.insert_sql("tmp_df", ["no_such_column"])
    with pytest.raises(ValueError):
        get_table("no_such_table")
