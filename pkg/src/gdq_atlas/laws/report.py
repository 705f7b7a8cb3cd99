"""
report.py - 定律检查结果

LawReport 记录一条定律在若干样本上的最大缺陷、容差与最坏样本（witness）。
DefectTracker 在采样循环中累计最大缺陷，只在刷新最大值时才序列化 witness。

使用示例:
    from gdq_atlas.laws.report import DefectTracker, reports_to_frame

    track = DefectTracker("leibniz", tolerance=0.0)
    for p, r in samples:
        track.add(defect(p, r), lambda: {"p": p.to_json(), "r": r.to_json()})
    report = track.report()

    df = reports_to_frame([report], suite="gdq")
"""

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Iterable, List, Optional

import pandas as pd

from ..contracts.conventions import jsonable
from ..contracts.fields import (
    LAW, STATEMENT, SAMPLES, DEFECT, TOLERANCE, PASSED, WITNESS, DETAILS, SUITE,
)
from ..contracts.mappings import get_statement


@dataclass(frozen=True)
class LawReport:
    """单条定律的检查结果

    Attributes:
        law: 定律名称（可带 ":标签" 后缀）
        samples: 样本数
        defect: 样本上的最大缺陷（≥ 0）
        tolerance: 容差
        passed: 是否通过
        witness: 最坏样本的序列化输入
        details: 附加数值（条件数、子缺陷、判定等）
        statement: 定律陈述
    """
    law: str
    samples: int
    defect: float
    tolerance: float
    passed: bool
    witness: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)
    statement: str = ""

    def __post_init__(self):
        if not self.statement:
            object.__setattr__(self, "statement", get_statement(self.law))

    def merge(self, other: "LawReport") -> "LawReport":
        """合并同一定律的两批样本：缺陷取最大，样本数相加"""
        if other.law != self.law:
            raise ValueError(f"Cannot merge reports of {self.law} and {other.law}")
        worst = other if other.defect > self.defect else self
        return replace(
            worst,
            samples=self.samples + other.samples,
            passed=self.passed and other.passed,
            details={**self.details, **other.details},
        )

    def to_dict(self) -> Dict[str, Any]:
        return jsonable({
            LAW: self.law,
            STATEMENT: self.statement,
            SAMPLES: self.samples,
            DEFECT: _finite(self.defect),
            TOLERANCE: self.tolerance,
            PASSED: self.passed,
            WITNESS: self.witness,
            DETAILS: self.details,
        })


def _finite(x: float) -> Any:
    if math.isfinite(x):
        return float(x)
    return "inf" if x > 0 else "nan"


class DefectTracker:
    """采样循环中的最大缺陷累计器"""

    def __init__(self, law: str, tolerance: float):
        self.law = law
        self.tolerance = float(tolerance)
        self.samples = 0
        self.defect = 0.0
        self.witness: Optional[Dict[str, Any]] = None
        self.details: Dict[str, Any] = {}

    def add(self, defect: float, witness: Optional[Callable[[], Dict[str, Any]]] = None) -> None:
        """记录一个样本的缺陷；NaN 视为无穷大"""
        defect = float(defect)
        if math.isnan(defect):
            defect = math.inf
        self.samples += 1
        if defect > self.defect:
            self.defect = defect
            if witness is not None:
                self.witness = witness()

    def report(self, passed: Optional[bool] = None, **details: Any) -> LawReport:
        if passed is None:
            passed = self.defect <= self.tolerance
        return LawReport(
            law=self.law,
            samples=self.samples,
            defect=self.defect,
            tolerance=self.tolerance,
            passed=bool(passed),
            witness=self.witness,
            details={**self.details, **details},
        )


def all_passed(reports: Iterable[LawReport]) -> bool:
    return all(r.passed for r in reports)


def reports_to_frame(reports: Iterable[LawReport], suite: Optional[str] = None) -> pd.DataFrame:
    """LawReport 列表 -> DataFrame（witness 序列化为 JSON 字符串）

    Example:
        df = reports_to_frame(reports, suite="gdq")
        df[~df["passed"]]
    """
    rows: List[Dict[str, Any]] = []
    for r in reports:
        row = {
            LAW: r.law,
            STATEMENT: r.statement,
            SAMPLES: r.samples,
            DEFECT: r.defect,
            TOLERANCE: r.tolerance,
            PASSED: r.passed,
            WITNESS: None if r.witness is None else json.dumps(jsonable(r.witness), sort_keys=True),
        }
        if suite is not None:
            row[SUITE] = suite
        rows.append(row)
    columns = ([SUITE] if suite is not None else []) + [LAW, STATEMENT, SAMPLES, DEFECT, TOLERANCE, PASSED, WITNESS]
    return pd.DataFrame(rows, columns=columns)
