"""
sampling.py - 定律检查的可复现随机采样

所有套件共用一个 SamplerConfig；每个套件按名称派生独立的随机流，
因此单独运行某个套件与在 "all" 中运行得到相同的样本。

使用示例:
    from gdq_atlas.laws.sampling import SamplerConfig, random_poly

    config = SamplerConfig(seed=7, q=2, n=3)
    rng = config.rng("gdq")
    p = random_poly(config.context(), rng, max_degree=3)
    S = random_gl(rng, 3)            # 条件数 ≤ 4 的可逆矩阵
"""

import zlib
from dataclasses import dataclass, fields
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.stats import unitary_group

from ..contracts.conventions import scaled, EXACT_TOL, NUMERIC_TOL, LOOSE_TOL
from ..contracts.fields import CONTEXT, SAMPLER, SEED, TOLERANCES, Q, N_VARS, ORDER
from ..algebra.ncpoly import BasisWord, NCPoly, PolyContext, from_matrix, from_terms


@dataclass(frozen=True)
class SamplerConfig:
    """采样配置

    Attributes:
        seed: 随机种子（必填）
        q, n: 多项式上下文
        order: 级数截断阶 D
        samples: 代数套件样本数
        max_degree: 随机多项式（含乘积）的最高次数
        max_terms: 随机多项式的项数上限
        psi_max: ψ_k 恢复检查的最高阶
        series_samples / series_size: 余表示套件的参数抽样数与矩阵尺寸上限 p
        lift_p: 提升套件的 p
        matricial_samples / max_size: 矩阵层套件样本数与尺寸上限
        positivity_trials / positivity_samples: 正性检查的 PSD 输入数 / 点数
        tol_scale: 容差倍率
        verify_fd: 是否开启二阶有限差分交叉检查
    """
    seed: int
    q: int = 2
    n: int = 2
    order: int = 6
    samples: int = 200
    max_degree: int = 5
    max_terms: int = 3
    psi_max: int = 4
    series_samples: int = 50
    series_size: int = 3
    lift_p: int = 2
    matricial_samples: int = 100
    max_size: int = 3
    positivity_trials: int = 200
    positivity_samples: int = 50
    tol_scale: float = 1.0
    verify_fd: bool = False
    exact_tol: float = EXACT_TOL
    numeric_tol: float = NUMERIC_TOL
    loose_tol: float = LOOSE_TOL

    def context(self) -> PolyContext:
        return PolyContext(q=self.q, n=self.n)

    def rng(self, name: str) -> np.random.Generator:
        """按名称派生的独立随机流"""
        return np.random.default_rng([self.seed, zlib.crc32(name.encode("utf-8"))])

    def tol(self, base: float) -> float:
        return scaled(base, self.tol_scale)

    @property
    def exact(self) -> float:
        return self.tol(self.exact_tol)

    @property
    def numeric(self) -> float:
        return self.tol(self.numeric_tol)

    @property
    def loose(self) -> float:
        return self.tol(self.loose_tol)

    @classmethod
    def from_scenario(
        cls,
        scenario: Dict[str, Any],
        seed: Optional[int] = None,
        tol_scale: Optional[float] = None,
        verify_fd: bool = False,
    ) -> "SamplerConfig":
        """由已校验的场景构造（CLI 参数覆盖场景值）"""
        known = {f.name for f in fields(cls)}
        kwargs: Dict[str, Any] = {k: v for k, v in scenario.get(SAMPLER, {}).items() if k in known}
        context = scenario.get(CONTEXT, {})
        kwargs.update(q=context.get(Q, 2), n=context.get(N_VARS, 2), order=context.get(ORDER, 6))
        tolerances = scenario.get(TOLERANCES, {})
        kwargs.update(
            exact_tol=tolerances.get("exact", EXACT_TOL),
            numeric_tol=tolerances.get("numeric", NUMERIC_TOL),
            loose_tol=tolerances.get("loose", LOOSE_TOL),
        )
        kwargs["seed"] = scenario[SEED] if seed is None else seed
        if tol_scale is not None:
            kwargs["tol_scale"] = tol_scale
        kwargs["verify_fd"] = verify_fd
        return cls(**kwargs)


# ---------- 标量 / 多项式 ----------

def gaussian_integer(rng: np.random.Generator) -> complex:
    """{-2..2} + i{-2..2} 中的非零高斯整数"""
    while True:
        re, im = rng.integers(-2, 3, size=2)
        if re or im:
            return complex(int(re), int(im))


def split_degrees(rng: np.random.Generator, total: int, parts: int) -> List[int]:
    """随机分配次数预算，各部分之和 ≤ total"""
    out = []
    remaining = total
    for _ in range(parts):
        d = int(rng.integers(0, remaining + 1))
        out.append(d)
        remaining -= d
    rng.shuffle(out)
    return out


def random_word(ctx: PolyContext, rng: np.random.Generator, degree: int) -> BasisWord:
    letters = tuple(int(i) for i in rng.integers(0, ctx.n, size=degree))
    units = tuple((int(r), int(s)) for r, s in rng.integers(0, ctx.q, size=(degree + 1, 2)))
    return BasisWord(units, letters)


def random_poly(
    ctx: PolyContext,
    rng: np.random.Generator,
    max_degree: int,
    max_terms: int = 3,
    integer: bool = True,
) -> NCPoly:
    """随机多项式：1..max_terms 个基单词，次数 ≤ max_degree

    integer=True 时系数为高斯整数（精确定律缺陷严格为 0），否则为小高斯随机数。
    """
    count = int(rng.integers(1, max_terms + 1))
    pairs = []
    for _ in range(count):
        word = random_word(ctx, rng, int(rng.integers(0, max_degree + 1)))
        c = gaussian_integer(rng) if integer else complex(*rng.normal(scale=0.5, size=2))
        pairs.append((word, c))
    return from_terms(ctx, pairs)


def random_b(ctx: PolyContext, rng: np.random.Generator, integer: bool = True) -> NCPoly:
    """B 中的随机稠密元素"""
    if integer:
        m = rng.integers(-2, 3, size=(ctx.q, ctx.q)) + 1j * rng.integers(-2, 3, size=(ctx.q, ctx.q))
    else:
        m = random_matrix(rng, ctx.q, ctx.q)
    return from_matrix(ctx, m)


# ---------- 矩阵 ----------

def random_matrix(rng: np.random.Generator, rows: int, cols: int, scale: float = 1.0) -> np.ndarray:
    """复高斯矩阵，元素方差 scale²"""
    return scale * (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    if n == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(n, random_state=rng)


def random_gl(rng: np.random.Generator, n: int, low: float = 0.5, high: float = 2.0) -> np.ndarray:
    """随机可逆矩阵 U·diag(σ)·V，σ ∈ [low, high]，条件数 ≤ high/low"""
    sv = rng.uniform(low, high, size=n)
    return random_unitary(rng, n) @ np.diag(sv) @ random_unitary(rng, n)


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    a = random_matrix(rng, n, n, scale)
    return (a + a.conj().T) / 2


def random_psd(rng: np.random.Generator, n: int, rank: Optional[int] = None) -> np.ndarray:
    """随机半正定矩阵 Σ v v*（rank 个向量）"""
    rank = n if rank is None else rank
    v = random_matrix(rng, n, rank)
    return v @ v.conj().T
