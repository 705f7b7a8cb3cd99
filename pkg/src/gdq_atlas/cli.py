"""
cli.py - 场景驱动的定律检查入口

读取场景文件（JSON，格式标签 gdq-scenario/1），构造站点、泛函与全矩阵函数，
按套件名排序依次运行定律检查，输出结构化报告并设置退出码：
    0 - 全部定律通过
    1 - 存在未通过的定律（报告照常写出）
    2 - 场景/IO 错误（不写报告，stderr 一行说明）

使用示例:
    gdq-atlas scenarios/default.scn
    gdq-atlas scenarios/default.scn --suite dq --suite fm --seed 11 --out data/reports/dq.json
    gdq-atlas scenarios/negative_weight.scn --db          # 同时写入 DuckDB 台账

    from gdq_atlas.cli import run_scenario
    result = run_scenario("scenarios/default.scn", suites=["gdq"])
    result.exit_code, result.report["passed"]
"""

import argparse
import hashlib
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .algebra.coalgebra import check_gdq_laws
from .algebra.matlift import check_lift_laws
from .algebra.ncpoly import NCPoly, PolyContext
from .algebra.series import check_corep_laws
from .config import DB_PATH, DEFAULT_SCENARIO, LOG_LEVEL, TOL_SCALE
from .contracts import (
    AtlasError,
    ValidationError,
    normalize_suites,
    quick_validate_scenario,
)
from .contracts.conventions import (
    EXIT_LAW_FAILURE,
    EXIT_OK,
    EXIT_SCHEMA_ERROR,
    REPORT_FORMAT,
    SUITE_ALL,
    SUITE_NAMES,
    decode_complex,
)
from .contracts.fields import (
    COEFFS, DENOMINATOR, EXIT_CODE, FORMAT, FUNCTIONAL, FUNCTIONS, KIND, LABEL, LAWS,
    NUMERATOR, PASSED, POLY, Q, CONTEXT, REGION, RULE, RUN_ID, SCENARIO, SEED, SITE,
    SUITE, SUITES, TIMING,
)
from .laws.report import LawReport, all_passed, reports_to_frame
from .laws.sampling import SamplerConfig
from .matricial.duality import Functional, UTransform, check_utransform_laws
from .matricial.fm import (
    Disk, FMFunc, FuncCalc, PolyEval, ResolventFunc, SpectrumSet, check_fm_laws, fm_combine,
    region_from_json,
)
from .matricial.fmdq import check_dq_laws
from .matricial.positivity import check_choi_fixtures, dual_positive
from .matricial.resolvent import Site, check_resolvent_laws, random_site

log = logging.getLogger(__name__)

PathLike = Union[str, Path]

DEFAULT_SITE_DIM = 3


@dataclass(frozen=True)
class ScenarioEnv:
    """一次运行共享的对象

    Attributes:
        name: 场景文件名（写入报告）
        config: 采样配置
        site: 站点（场景未声明时为随机自伴站点）
        functional: φ（未声明时为归一化迹）
        functions: 带标签的全矩阵函数
        declared_site: 场景是否显式声明了站点
    """
    name: str
    config: SamplerConfig
    site: Site
    functional: Functional
    functions: Dict[str, FMFunc]
    declared_site: bool = False


@dataclass
class RunResult:
    """run_scenario 的返回值；error 非空时 exit_code 为 2 且 report 为空"""
    exit_code: int
    report: Dict[str, Any] = field(default_factory=dict)
    reports: Dict[str, List[LawReport]] = field(default_factory=dict)
    error: Optional[str] = None


# ---------- 场景 -> 对象 ----------

def load_scenario(path: PathLike) -> Dict[str, Any]:
    """读取并校验场景文件

    Raises:
        OSError: 文件不可读
        json.JSONDecodeError: 不是合法 JSON
        ValidationError: 结构不合法
    """
    text = Path(path).read_text(encoding="utf-8")
    return quick_validate_scenario(json.loads(text))


def build_function(decl: Dict[str, Any], q: int, site: Optional[Site], functional: Optional[Functional]) -> FMFunc:
    """单条函数声明 -> FMFunc"""
    kind, label = decl[KIND], decl[LABEL]
    if kind == "func_calc":
        region = region_from_json(decl[REGION])
        if decl[RULE] == "polynomial":
            return FuncCalc.polynomial([decode_complex(c) for c in decl[COEFFS]], region, label)
        return FuncCalc.rational(
            [decode_complex(c) for c in decl[NUMERATOR]],
            [decode_complex(c) for c in decl[DENOMINATOR]],
            region,
            label,
        )
    if kind == "poly_eval":
        poly = NCPoly.from_json(PolyContext(q=q, n=1), decl[POLY])
        domain = SpectrumSet(region_from_json(decl[REGION]), q) if REGION in decl else None
        return PolyEval(poly, domain, label)
    if kind == "resolvent":
        return ResolventFunc(site, label)
    return UTransform(site, functional, label)


def default_functions(site: Site, functional: Functional) -> Dict[str, FMFunc]:
    """场景未声明函数时的默认集合：z²、1/(2−z)、R(Y; B)、U(φ)"""
    return {
        "square": FuncCalc.polynomial([0, 0, 1], Disk(0, 2.0), "square"),
        "inverse": FuncCalc.rational([1], [2, -1], Disk(0, 1.5), "inverse"),
        "resolvent": ResolventFunc(site, "resolvent"),
        "u": UTransform(site, functional, "u"),
    }


def build_env(
    scenario: Dict[str, Any],
    name: str,
    seed: Optional[int] = None,
    tol_scale: Optional[float] = None,
    verify_fd: bool = False,
) -> ScenarioEnv:
    config = SamplerConfig.from_scenario(scenario, seed=seed, tol_scale=tol_scale, verify_fd=verify_fd)
    declared = SITE in scenario
    if declared:
        site = Site.from_json(scenario[SITE])
    else:
        site = random_site(config.rng("site"), DEFAULT_SITE_DIM, "hermitian")
    if FUNCTIONAL in scenario:
        functional = Functional.from_json(scenario[FUNCTIONAL])
    else:
        functional = Functional.normalized_trace(site.d)

    decls = scenario.get(FUNCTIONS, [])
    if decls:
        q = scenario[CONTEXT][Q]
        functions = {d[LABEL]: build_function(d, q, site, functional) for d in decls}
    else:
        functions = default_functions(site, functional)
    log.debug("scenario %s: %s, %d functions", name, site, len(functions))
    return ScenarioEnv(name, config, site, functional, functions, declared)


# ---------- 套件 ----------

def _merge_by_law(*batches: List[LawReport]) -> List[LawReport]:
    merged: Dict[str, LawReport] = {}
    for batch in batches:
        for r in batch:
            merged[r.law] = merged[r.law].merge(r) if r.law in merged else r
    return list(merged.values())


def _run_resolvent(env: ScenarioEnv) -> List[LawReport]:
    random_sites = check_resolvent_laws(env.config)
    if not env.declared_site:
        return random_sites
    return _merge_by_law(random_sites, check_resolvent_laws(env.config, env.site))


def _run_fm(env: ScenarioEnv) -> List[LawReport]:
    out: List[LawReport] = []
    for label, f in env.functions.items():
        out.extend(check_fm_laws(f, env.config, label))
    return out


def _run_dq(env: ScenarioEnv) -> List[LawReport]:
    out: List[LawReport] = []
    for label, f in env.functions.items():
        out.extend(check_dq_laws(f, env.config, label=label))
    return out


def _run_dualpos(env: ScenarioEnv) -> List[LawReport]:
    """Choi 自检 + 每个 U(φ) 的 −U(φ) 对偶正性"""
    out = check_choi_fixtures(env.config)
    targets = {label: f for label, f in env.functions.items() if isinstance(f, UTransform)}
    if not targets:
        targets = {"u": UTransform(env.site, env.functional, "u")}
    for label, u in targets.items():
        if not u.domain.is_self_adjoint():
            log.warning("dualpos[%s]: site lacks star_closed/y_selfadjoint, skipped", label)
            continue
        out.extend(dual_positive(fm_combine("scale", u, scalar=-1.0), env.config, label))
    return out


def _run_utransform(env: ScenarioEnv) -> List[LawReport]:
    return check_utransform_laws(env.site, env.functional, env.config)


SUITE_RUNNERS: Dict[str, Callable[[ScenarioEnv], List[LawReport]]] = {
    "corep": lambda env: check_corep_laws(env.config),
    "dq": _run_dq,
    "dualpos": _run_dualpos,
    "fm": _run_fm,
    "gdq": lambda env: check_gdq_laws(env.config),
    "lift": lambda env: check_lift_laws(env.config),
    "resolvent": _run_resolvent,
    "utransform": _run_utransform,
}


SUITE_ERRORS = (AtlasError, ValueError, ArithmeticError, np.linalg.LinAlgError)


def suite_error_report(suite: str, error: BaseException) -> LawReport:
    """套件运行中抛出的异常记为一条失败的定律 suite_error:<suite>"""
    return LawReport(
        law=f"suite_error:{suite}",
        samples=0,
        defect=math.inf,
        tolerance=0.0,
        passed=False,
        witness={"error": type(error).__name__, "message": str(error)},
    )


def run_suites(env: ScenarioEnv, suites: Sequence[str]) -> Dict[str, List[LawReport]]:
    """按套件名排序运行，返回 suite -> 报告列表；套件内的异常变成失败报告，不中断其余套件"""
    results: Dict[str, List[LawReport]] = {}
    for suite in sorted(suites):
        log.info("suite %s: start", suite)
        try:
            results[suite] = SUITE_RUNNERS[suite](env)
        except SUITE_ERRORS as e:
            log.error("suite %s: %s: %s", suite, type(e).__name__, e)
            results[suite] = [suite_error_report(suite, e)]
        failed = [r.law for r in results[suite] if not r.passed]
        log.info("suite %s: %d laws, %d failed", suite, len(results[suite]), len(failed))
    return results


# ---------- 报告 ----------

def build_report(env: ScenarioEnv, results: Dict[str, List[LawReport]]) -> Dict[str, Any]:
    passed = all(all_passed(rs) for rs in results.values())
    return {
        FORMAT: REPORT_FORMAT,
        SCENARIO: env.name,
        SEED: env.config.seed,
        SUITES: {
            suite: {LAWS: [r.to_dict() for r in rs], PASSED: all_passed(rs)}
            for suite, rs in sorted(results.items())
        },
        PASSED: passed,
        EXIT_CODE: EXIT_OK if passed else EXIT_LAW_FAILURE,
    }


def dump_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_run_id(report: Dict[str, Any]) -> str:
    """报告（不含 timing）的 sha1"""
    stable = {k: v for k, v in report.items() if k != TIMING}
    return hashlib.sha1(dump_report(stable).encode("utf-8")).hexdigest()[:16]


def summary_frame(results: Dict[str, List[LawReport]]) -> pd.DataFrame:
    frames = [reports_to_frame(rs, suite=suite) for suite, rs in sorted(results.items())]
    if not frames:
        return pd.DataFrame()
    return pd.concat(frames, ignore_index=True)


def persist_run(report: Dict[str, Any], results: Dict[str, List[LawReport]], db_path: PathLike) -> str:
    """写入 scenario_run / law_report 两张表，返回 run_id"""
    from .pipeline.duckdb_store import save_law_reports, save_run

    run_id = report_run_id(report)
    save_run(
        {
            RUN_ID: run_id,
            SCENARIO: report[SCENARIO],
            SEED: report[SEED],
            SUITES: ",".join(sorted(results)),
            PASSED: report[PASSED],
            FORMAT: report[FORMAT],
        },
        db_path=db_path,
    )
    df = summary_frame(results)
    if not df.empty:
        save_law_reports(df.assign(**{RUN_ID: run_id}), replace=True, db_path=db_path)
    log.info("run %s saved to %s", run_id, db_path)
    return run_id


def run_scenario(
    path: PathLike,
    suites: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
    tol_scale: Optional[float] = None,
    verify_fd: bool = False,
) -> RunResult:
    """运行场景文件

    Args:
        path: 场景文件路径
        suites: 覆盖场景中的套件选择（可含 "all"）
        seed: 覆盖场景种子
        tol_scale: 容差倍率，默认取 GDQ_TOL_SCALE
        verify_fd: 开启二阶有限差分交叉检查

    Returns:
        RunResult；场景/IO 错误时 exit_code = 2，error 为一行说明；
        套件运行中的异常记为失败定律（exit_code = 1，报告照常生成）

    Example:
        result = run_scenario("scenarios/negative_weight.scn")
        result.exit_code   # 1
    """
    try:
        scenario = load_scenario(path)
        selected = normalize_suites(list(suites)) if suites else scenario[SUITES]
        env = build_env(
            scenario,
            Path(path).name,
            seed=seed,
            tol_scale=TOL_SCALE if tol_scale is None else tol_scale,
            verify_fd=verify_fd,
        )
    except (OSError, json.JSONDecodeError, ValidationError, AtlasError, ValueError, KeyError) as e:
        message = f"{type(e).__name__}: {e}"
        log.error("scenario %s: %s", path, message)
        return RunResult(exit_code=EXIT_SCHEMA_ERROR, error=message)

    timing: Dict[str, float] = {}
    results: Dict[str, List[LawReport]] = {}
    for suite in selected:
        start = time.perf_counter()
        results.update(run_suites(env, [suite]))
        timing[suite] = round(time.perf_counter() - start, 3)

    report = build_report(env, results)
    report[TIMING] = timing
    return RunResult(exit_code=report[EXIT_CODE], report=report, reports=results)


# ---------- 命令行 ----------

def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="gdq-atlas",
        description="Run law suites of a scenario and write a JSON report",
    )
    parser.add_argument("scenario", nargs="?", default=str(DEFAULT_SCENARIO), help="scenario file (.scn JSON)")
    parser.add_argument(
        "--suite",
        action="append",
        choices=SUITE_NAMES + (SUITE_ALL,),
        help="suite to run; repeatable; overrides the scenario selection",
    )
    parser.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    parser.add_argument("--tol-scale", type=float, default=None, help="multiply every tolerance")
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    parser.add_argument("--verify-fd", action="store_true", help="enable finite-difference cross-checks")
    parser.add_argument("--db", nargs="?", const=str(DB_PATH), default=None, help="persist the run to DuckDB")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="logging level (stderr)")
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    result = run_scenario(
        args.scenario,
        suites=args.suite,
        seed=args.seed,
        tol_scale=args.tol_scale,
        verify_fd=args.verify_fd,
    )
    if result.error is not None:
        print(f"gdq-atlas: {result.error}", file=sys.stderr)
        return result.exit_code

    text = dump_report(result.report)
    try:
        if args.out:
            out = Path(args.out)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        if args.db:
            persist_run(result.report, result.reports, args.db)
    except (OSError, AtlasError) as e:
        print(f"gdq-atlas: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_SCHEMA_ERROR

    summary = summary_frame(result.reports)
    if not summary.empty:
        columns = [SUITE, "law", "samples", "defect", "tolerance", "passed"]
        print(summary[columns].to_string(index=False), file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
