"""
conventions.py - 通用约定

定义数值阈值、规模上限、文件格式标签以及矩阵的 JSON 编码规则。
全项目统一使用这些约定。

使用示例:
    from gdq_atlas.contracts import (
        COEFF_EPS, KAPPA_MAX,
        encode_matrix, decode_matrix,
    )

    # 矩阵 <-> [re, im] 行主序嵌套数组
    payload = encode_matrix(np.eye(2))        # -> [[[1.0, 0.0], [0.0, 0.0]], ...]
    m = decode_matrix(payload)                # -> complex ndarray (2, 2)

    # 容差缩放
    tol = scaled(NUMERIC_TOL, tol_scale=10)   # -> 1e-9

约定内容:
    - 系数规范化阈值: COEFF_EPS (|c| < 1e-14 的系数丢弃)
    - 预解集条件数上限: KAPPA_MAX = 1e8
    - 级数 0 次部分条件数上限: SERIES_COND_MAX = 1e8
    - 谱集合边界余量: SPECTRAL_TOL = 1e-9
    - Choi 厄米化容差: CHOI_HERMITIAN_TOL = 1e-9
    - 随机采样点条件数上限: SAMPLE_COND_MAX = 1e4
    - 收敛探针斜率容差: PROBE_SLOPE_TOL = 0.15
    - 有限差分交叉检查: FD_STEP = 1e-4, FD_TOL = 1e-6
    - 规模上限: MAX_SIZE = 6, MAX_ORDER = 8, MAX_SITE_DIM = 6
    - 矩阵编码: 行主序，每个元素为 [re, im]
"""

from typing import Any, List, Sequence

import numpy as np

from ..config import KAPPA_MAX as _ENV_KAPPA_MAX

SCENARIO_FORMAT = "gdq-scenario/1"
REPORT_FORMAT = "gdq-report/1"

COEFF_EPS = 1e-14
KAPPA_MAX = _ENV_KAPPA_MAX
SERIES_COND_MAX = 1e8
SPECTRAL_TOL = 1e-9
CHOI_HERMITIAN_TOL = 1e-9
RANK_RTOL = 1e-8
SAMPLE_COND_MAX = 1e4
PROBE_SLOPE_TOL = 0.15
FD_STEP = 1e-4
FD_TOL = 1e-6
WITNESS_THRESHOLD = 1e-6

EXACT_TOL = 0.0
NUMERIC_TOL = 1e-10
LOOSE_TOL = 1e-9

POSITIVITY_TRIALS = 200
PSI_MAX_ORDER = 4

MAX_SIZE = 6
MAX_ORDER = 8
MAX_SITE_DIM = 6
MAX_Q = 4
MAX_VARS = 9

SUITE_NAMES = ("corep", "dq", "dualpos", "fm", "gdq", "lift", "resolvent", "utransform")
SUITE_ALL = "all"

EXIT_OK = 0
EXIT_LAW_FAILURE = 1
EXIT_SCHEMA_ERROR = 2

VALUE_SPACE_SCALAR = "C"
VALUE_SPACE_B = "B"
VALUE_SPACE_E = "E"


def scaled(tol: float, tol_scale: float = 1.0) -> float:
    """按全局倍率缩放容差

    Args:
        tol: 基准容差
        tol_scale: 倍率（CLI --tol-scale）

    Returns:
        缩放后的容差；精确定律（tol=0）保持 0
    """
    return float(tol) * float(tol_scale)


def encode_complex(z: complex) -> List[float]:
    """复数 -> [re, im]"""
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(pair: Any) -> complex:
    """[re, im] 或实数 -> 复数

    Raises:
        ValueError: 形状不是长度 2 的数组也不是实数
    """
    if isinstance(pair, (int, float)):
        return complex(pair)
    if isinstance(pair, (list, tuple)) and len(pair) == 2:
        return complex(float(pair[0]), float(pair[1]))
    raise ValueError(f"Expected [re, im] pair, got {pair!r}")


def encode_matrix(m: np.ndarray) -> List[List[List[float]]]:
    """复矩阵 -> 行主序 [re, im] 嵌套数组

    Example:
        encode_matrix(np.array([[1j]]))  # -> [[[0.0, 1.0]]]
    """
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[encode_complex(z) for z in row] for row in m]


def decode_matrix(rows: Sequence[Sequence[Any]]) -> np.ndarray:
    """行主序 [re, im] 嵌套数组 -> 复矩阵

    Raises:
        ValueError: 行长度不一致或元素格式错误
    """
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ValueError("Matrix must be a non-empty list of rows")
    width = len(rows[0])
    out = np.zeros((len(rows), width), dtype=complex)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"Ragged matrix: row {i} has {len(row)} entries, expected {width}")
        for j, entry in enumerate(row):
            out[i, j] = decode_complex(entry)
    if not np.all(np.isfinite(out)):
        raise ValueError("Matrix has non-finite entries")
    return out


def jsonable(value: Any) -> Any:
    """把 numpy 标量/数组/复数递归转换成可 JSON 序列化的结构

    复数与复矩阵统一使用 [re, im] 编码，保证报告稳定可 diff。
    """
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        if value.ndim == 2:
            return encode_matrix(value)
        if np.iscomplexobj(value):
            return [jsonable(v) for v in value.tolist()]
        return value.tolist()
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return encode_complex(value)
    return value
