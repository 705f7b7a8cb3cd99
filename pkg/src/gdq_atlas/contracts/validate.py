"""
validate.py - 极简校验函数

提供场景文件与报告表的校验功能：
- 缺字段检测: 场景顶层/子段是否缺少必需字段
- 规模上限: 尺寸、截断阶、站点维数不超过约定上限
- 矩阵格式: 行主序 [re, im] 嵌套数组、方阵、尺寸一致
- 报告表缺列检测: DataFrame 是否缺少台账必需列

使用示例:
    from gdq_atlas.contracts import quick_validate_scenario, validate_report_frame

    # 校验 + 填充默认值
    scenario = quick_validate_scenario(json.loads(text))

    # 报告表入库前校验
    validate_report_frame(df)

异常类型:
    - ValidationError: 校验异常基类
    - MissingFieldsError: 缺少必需字段
    - FormatVersionError: 格式标签不匹配
    - CapExceededError: 超出规模上限
    - MatrixFormatError: 矩阵格式错误
    - UnknownNameError: 未知的套件/类型名称
    - MissingColumnsError: 报告表缺少必需列
"""

import copy
from typing import Any, Dict, List, Set, Tuple

import pandas as pd

from .errors import AtlasError
from .schema import get_table
from .fields import (
    FORMAT, SEED, CONTEXT, SITE, FUNCTIONAL, FUNCTIONS, SUITES, SAMPLER, TOLERANCES,
    Q, N_VARS, ORDER, DIM, BASIS, Y, FLAGS, WEIGHT, LABEL, KIND, RULE, COEFFS,
    NUMERATOR, DENOMINATOR, REGION, POLY, TERMS, PARTS, RUN_ID, SUITE,
)
from .conventions import (
    SCENARIO_FORMAT, SUITE_NAMES, SUITE_ALL,
    MAX_SIZE, MAX_ORDER, MAX_SITE_DIM, MAX_Q, MAX_VARS,
    decode_matrix,
)

FUNCTION_KINDS = ("func_calc", "poly_eval", "resolvent", "u_transform")
RULE_KINDS = ("polynomial", "rational")
REGION_KINDS = ("disk", "half_plane", "disk_complement", "union", "plane")

DEFAULT_CONTEXT = {Q: 2, N_VARS: 2, ORDER: 6}

# 采样器字段 -> (默认值, 上限)；上限为 None 表示不设上限
SAMPLER_FIELDS: Dict[str, Tuple[Any, Any]] = {
    "samples": (200, None),
    "max_degree": (5, MAX_ORDER),
    "max_terms": (3, None),
    "psi_max": (4, MAX_ORDER),
    "series_samples": (50, None),
    "series_size": (3, MAX_SIZE),
    "lift_p": (2, 3),
    "matricial_samples": (100, None),
    "max_size": (3, MAX_SIZE),
    "positivity_trials": (200, None),
    "positivity_samples": (50, None),
}

DEFAULT_TOLERANCES = {"exact": 0.0, "numeric": 1e-10, "loose": 1e-9}


class ValidationError(AtlasError):
    """校验异常基类"""
    pass


class MissingFieldsError(ValidationError):
    """缺少必需字段

    Attributes:
        missing: 缺少的字段名集合
        section: 所在段落（可选）
    """
    def __init__(self, missing: Set[str], section: str = None):
        self.missing = missing
        self.section = section
        msg = f"Missing fields: {sorted(missing)}"
        if section:
            msg = f"[{section}] {msg}"
        super().__init__(msg)


class FormatVersionError(ValidationError):
    """格式标签不匹配

    Attributes:
        got: 实际标签
        expected: 期望标签
    """
    def __init__(self, got: Any, expected: str = SCENARIO_FORMAT):
        self.got = got
        self.expected = expected
        super().__init__(f"Unsupported format {got!r}, expected {expected!r}")


class CapExceededError(ValidationError):
    """超出规模上限

    Attributes:
        field: 字段名
        value: 实际值
        cap: 上限
    """
    def __init__(self, field: str, value: Any, cap: Any):
        self.field = field
        self.value = value
        self.cap = cap
        super().__init__(f"Field '{field}'={value} exceeds cap {cap}")


class MatrixFormatError(ValidationError):
    """矩阵格式错误

    Attributes:
        field: 字段路径
        reason: 原因
    """
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"Bad matrix at '{field}': {reason}")


class UnknownNameError(ValidationError):
    """未知名称

    Attributes:
        what: 名称类别（suite / kind / rule / region）
        name: 给定名称
        available: 可选名称
    """
    def __init__(self, what: str, name: Any, available):
        self.what = what
        self.name = name
        self.available = tuple(available)
        super().__init__(f"Unknown {what}: {name!r}. Available: {list(self.available)}")


class MissingColumnsError(ValidationError):
    """缺少必需列异常

    Attributes:
        missing: 缺少的列名集合
        table: 表名（可选）
    """
    def __init__(self, missing: Set[str], table: str = None):
        self.missing = missing
        self.table = table
        msg = f"Missing columns: {sorted(missing)}"
        if table:
            msg = f"[{table}] {msg}"
        super().__init__(msg)


def check_missing_fields(section: Dict[str, Any], required, name: str = None) -> None:
    """检查字典是否缺少必需字段

    Raises:
        MissingFieldsError: 存在缺失字段时抛出
    """
    if not isinstance(section, dict):
        raise ValidationError(f"[{name}] expected an object, got {type(section).__name__}")
    missing = set(required) - set(section)
    if missing:
        raise MissingFieldsError(missing, name)


def check_positive_int(value: Any, field: str, cap: int = None) -> int:
    """检查正整数并施加上限

    Raises:
        ValidationError: 不是正整数
        CapExceededError: 超过上限
    """
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValidationError(f"Field '{field}' must be a positive integer, got {value!r}")
    if cap is not None and value > cap:
        raise CapExceededError(field, value, cap)
    return value


def check_square_matrix(payload: Any, field: str, size: int = None) -> None:
    """检查 [re, im] 方阵格式

    Raises:
        MatrixFormatError: 格式错误或尺寸不符
    """
    try:
        m = decode_matrix(payload)
    except (ValueError, TypeError) as e:
        raise MatrixFormatError(field, str(e)) from e
    if m.shape[0] != m.shape[1]:
        raise MatrixFormatError(field, f"not square: {m.shape}")
    if size is not None and m.shape[0] != size:
        raise MatrixFormatError(field, f"expected {size}x{size}, got {m.shape}")


def normalize_suites(suites: Any) -> List[str]:
    """把套件选择规范化为排序后的套件名列表

    Raises:
        UnknownNameError: 存在未知套件名
    """
    if isinstance(suites, str):
        suites = [suites]
    if not suites:
        suites = [SUITE_ALL]
    out: Set[str] = set()
    for s in suites:
        if s == SUITE_ALL:
            out.update(SUITE_NAMES)
        elif s in SUITE_NAMES:
            out.add(s)
        else:
            raise UnknownNameError("suite", s, SUITE_NAMES + (SUITE_ALL,))
    return sorted(out)


def _validate_region(region: Any, field: str) -> None:
    check_missing_fields(region, {KIND}, field)
    kind = region[KIND]
    if kind not in REGION_KINDS:
        raise UnknownNameError("region", kind, REGION_KINDS)
    if kind == "union":
        check_missing_fields(region, {PARTS}, field)
        for i, part in enumerate(region[PARTS]):
            _validate_region(part, f"{field}.{PARTS}[{i}]")


def _validate_function(decl: Any, index: int) -> None:
    field = f"{FUNCTIONS}[{index}]"
    check_missing_fields(decl, {LABEL, KIND}, field)
    kind = decl[KIND]
    if kind not in FUNCTION_KINDS:
        raise UnknownNameError("function kind", kind, FUNCTION_KINDS)
    if kind == "func_calc":
        check_missing_fields(decl, {RULE, REGION}, field)
        rule = decl[RULE]
        if rule not in RULE_KINDS:
            raise UnknownNameError("rule", rule, RULE_KINDS)
        required = {COEFFS} if rule == "polynomial" else {NUMERATOR, DENOMINATOR}
        check_missing_fields(decl, required, field)
        _validate_region(decl[REGION], f"{field}.{REGION}")
    elif kind == "poly_eval":
        check_missing_fields(decl, {POLY}, field)
        check_missing_fields(decl[POLY], {TERMS}, f"{field}.{POLY}")
        if REGION in decl:
            _validate_region(decl[REGION], f"{field}.{REGION}")


def quick_validate_scenario(raw: Dict[str, Any]) -> Dict[str, Any]:
    """快速校验场景并填充默认值

    组合格式标签、必需字段、规模上限与矩阵格式检查，返回规范化副本。

    Args:
        raw: json.loads 得到的场景字典

    Returns:
        填充默认值后的场景字典（副本），SUITES 已规范化为排序列表

    Raises:
        ValidationError 及其子类: 任何结构问题

    Example:
        scenario = quick_validate_scenario({"format": "gdq-scenario/1", "seed": 7})
    """
    check_missing_fields(raw, {FORMAT, SEED}, "scenario")
    if raw[FORMAT] != SCENARIO_FORMAT:
        raise FormatVersionError(raw[FORMAT])
    seed = raw[SEED]
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ValidationError(f"Field '{SEED}' must be a non-negative integer, got {seed!r}")

    scenario = copy.deepcopy(raw)
    scenario[SUITES] = normalize_suites(raw.get(SUITES, [SUITE_ALL]))

    context = {**DEFAULT_CONTEXT, **raw.get(CONTEXT, {})}
    check_positive_int(context[Q], f"{CONTEXT}.{Q}", MAX_Q)
    check_positive_int(context[N_VARS], f"{CONTEXT}.{N_VARS}", MAX_VARS)
    check_positive_int(context[ORDER], f"{CONTEXT}.{ORDER}", MAX_ORDER)
    scenario[CONTEXT] = context

    if SITE in raw:
        site = raw[SITE]
        check_missing_fields(site, {DIM, BASIS, Y}, SITE)
        d = check_positive_int(site[DIM], f"{SITE}.{DIM}", MAX_SITE_DIM)
        if not isinstance(site[BASIS], list) or not site[BASIS]:
            raise MatrixFormatError(f"{SITE}.{BASIS}", "basis must be a non-empty list")
        for i, b in enumerate(site[BASIS]):
            check_square_matrix(b, f"{SITE}.{BASIS}[{i}]", d)
        check_square_matrix(site[Y], f"{SITE}.{Y}", d)
        if FLAGS in site and not isinstance(site[FLAGS], dict):
            raise ValidationError(f"[{SITE}] '{FLAGS}' must be an object")
        if FUNCTIONAL in raw:
            check_missing_fields(raw[FUNCTIONAL], {WEIGHT}, FUNCTIONAL)
            check_square_matrix(raw[FUNCTIONAL][WEIGHT], f"{FUNCTIONAL}.{WEIGHT}", d)
    elif FUNCTIONAL in raw:
        raise MissingFieldsError({SITE}, "scenario")

    functions = raw.get(FUNCTIONS, [])
    if not isinstance(functions, list):
        raise ValidationError(f"Field '{FUNCTIONS}' must be a list")
    for i, decl in enumerate(functions):
        _validate_function(decl, i)
        if decl[KIND] in ("resolvent", "u_transform") and SITE not in raw:
            raise MissingFieldsError({SITE}, f"{FUNCTIONS}[{i}]")
        if decl[KIND] == "u_transform" and FUNCTIONAL not in raw:
            raise MissingFieldsError({FUNCTIONAL}, f"{FUNCTIONS}[{i}]")
    labels = [decl[LABEL] for decl in functions]
    if len(set(labels)) != len(labels):
        raise ValidationError(f"Duplicate function labels: {labels}")

    sampler = dict(raw.get(SAMPLER, {}))
    unknown = set(sampler) - set(SAMPLER_FIELDS)
    if unknown:
        raise UnknownNameError("sampler field", sorted(unknown)[0], SAMPLER_FIELDS)
    for key, (default, cap) in SAMPLER_FIELDS.items():
        value = sampler.get(key, default)
        sampler[key] = check_positive_int(value, f"{SAMPLER}.{key}", cap)
    scenario[SAMPLER] = sampler

    tolerances = {**DEFAULT_TOLERANCES, **raw.get(TOLERANCES, {})}
    for key, value in tolerances.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
            raise ValidationError(f"Tolerance '{key}' must be a non-negative number, got {value!r}")
    scenario[TOLERANCES] = tolerances
    return scenario


def check_missing_columns(
    df: pd.DataFrame,
    required: Set[str],
    table_name: str = None
) -> Tuple[bool, Set[str]]:
    """检查 DataFrame 是否缺少必需列

    Returns:
        (是否有缺失, 缺失列集合) - 无缺失时返回 (False, set())

    Raises:
        MissingColumnsError: 存在缺失列时抛出
    """
    missing = set(required) - set(df.columns)
    if missing:
        raise MissingColumnsError(missing, table_name)
    return False, set()


def validate_report_frame(df: pd.DataFrame, table_name: str = "law_report") -> pd.DataFrame:
    """校验报告表结构并按台账列顺序返回

    created_at 由数据库默认值填充，可缺省。

    Raises:
        MissingColumnsError: 缺少必需列时抛出

    Example:
        df = validate_report_frame(reports_to_frame(reports, suite="gdq").assign(run_id="r1"))
    """
    schema = get_table(table_name)
    required = set(schema.required_columns())
    check_missing_columns(df, required, table_name)
    if df[[RUN_ID] + ([SUITE] if SUITE in required else [])].isna().any().any():
        raise ValidationError(f"[{table_name}] key columns contain nulls")
    return df[[c for c in schema.column_names() if c in df.columns]]
