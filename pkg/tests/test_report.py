import json
import math

import numpy as np
import pytest

from gdq_atlas.contracts.mappings import get_statement
from gdq_atlas.laws.report import DefectTracker, LawReport, all_passed, reports_to_frame


def test_tracker_keeps_worst_witness():
    track = DefectTracker("leibniz", tolerance=0.0)
    calls = []
    for k, defect in enumerate([0.0, 2.0, 1.0]):
        track.add(defect, lambda k=k: calls.append(k) or {"k": k})
    report = track.report()
    assert (report.samples, report.defect, report.passed) == (3, 2.0, False)
    assert report.witness == {"k": 1}
    assert calls == [1]


def test_nan_counts_as_infinite():
    track = DefectTracker("openness", tolerance=1.0)
    track.add(float("nan"))
    report = track.report()
    assert math.isinf(report.defect) and not report.passed
    assert report.to_dict()["defect"] == "inf"


def test_statement_follows_label_suffix():
    report = DefectTracker("fm_direct_sum:square", 1e-9).report()
    assert report.statement == get_statement("fm_direct_sum")
    with pytest.raises(ValueError):
        LawReport("no_such_law", 0, 0.0, 0.0, True)


def test_merge():
    a = LawReport("pairing", 2, 1e-12, 1e-9, True, witness={"b": 1}, details={"kappa": 3})
    b = LawReport("pairing", 3, 1e-8, 1e-9, False, witness={"b": 2}, details={"extra": 1})
    merged = a.merge(b)
    assert merged.samples == 5 and not merged.passed
    assert merged.witness == {"b": 2}
    assert merged.details == {"kappa": 3, "extra": 1}
    with pytest.raises(ValueError):
        a.merge(LawReport("leibniz", 1, 0.0, 0.0, True))


def test_to_dict_is_json_ready():
    report = LawReport("dual_mul", 1, 0.5, 1e-10, False, witness={"b": np.array([[1j]])})
    payload = report.to_dict()
    assert payload["witness"] == {"b": [[[0.0, 1.0]]]}
    json.dumps(payload)


def test_frame():
    reports = [DefectTracker("leibniz", 0.0).report(), LawReport("mul_unit", 4, 1.0, 0.0, False, witness={"p": 1})]
    assert not all_passed(reports)
    df = reports_to_frame(reports, suite="gdq")
    assert list(df["suite"]) == ["gdq", "gdq"]
    assert df.loc[1, "witness"] == '{"p": 1}'
    assert "suite" not in reports_to_frame(reports).columns
