"""
series.py - 截断非交换幂级数矩阵、Neumann 求逆与余表示构造/校验

MatOverSeries 是 p×p 的 NCPoly 矩阵，order=D 时所有运算结果截断到 X-次数 ≤ D；
order=None 时为不截断的多项式矩阵（matlift 复用）。

余表示：α = Σ a_ij ⊗ e_ij 满足 ∂ a_ik = Σ_j a_ij ⊗ a_jk。
由于 ∂ 把次数降一，恒等式只在总次数 ≤ D−1 上检查。

使用示例:
    from gdq_atlas.algebra.series import corep_build, corep_defect, series_invert

    alpha = corep_build("resolvent", {"n": n_matrix}, ctx=ctx, order=4)
    corep_defect(alpha, 0)              # ≈ 0
    corep_defect(MatOverSeries.identity(ctx, 2, 4), 0)   # = p·q²

构造类型:
    - resolvent:      (n − X⊗I_p)⁻¹
    - sandwich:       β₃(β₂ − β₁(X⊗I_p)β₃)⁻¹β₁
    - moebius_left:   (1 − ξβ)⁻¹ξ
    - moebius_right:  ξ(1 − βξ)⁻¹
"""

import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..contracts.conventions import SERIES_COND_MAX, encode_matrix
from ..contracts.errors import SeriesInversionError, SizeMismatchError
from ..laws.report import DefectTracker, LawReport
from ..laws.sampling import SamplerConfig, random_gl, random_matrix
from .coalgebra import partial_dq
from .ncpoly import NCPoly, PolyContext, Scalar, check_same_context, from_matrix, mul, variable, zero
from .tensor import TensorPoly, tensor

log = logging.getLogger(__name__)

COREP_KINDS = ("resolvent", "sandwich", "moebius_left", "moebius_right")


def _min_order(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class MatOverSeries:
    """M_p(A) 中的（截断）元素（不可变）

    Attributes:
        ctx: 多项式上下文
        size: 矩阵尺寸 p
        order: 截断阶 D（None 表示不截断）
    """
    __slots__ = ("ctx", "size", "order", "_entries")

    def __init__(self, entries: Sequence[Sequence[NCPoly]], order: Optional[int] = None):
        size = len(entries)
        if size == 0 or any(len(row) != size for row in entries):
            raise SizeMismatchError("square p×p", [len(row) for row in entries], "series matrix")
        ctx = entries[0][0].ctx
        rows = []
        for row in entries:
            for e in row:
                check_same_context(entries[0][0], e)
            rows.append(tuple(e if order is None else e.truncate(order) for e in row))
        self.ctx = ctx
        self.size = size
        self.order = order
        self._entries = tuple(rows)

    # ---------- 构造 ----------

    @classmethod
    def zero(cls, ctx: PolyContext, size: int, order: Optional[int] = None) -> "MatOverSeries":
        return cls([[zero(ctx)] * size for _ in range(size)], order)

    @classmethod
    def identity(cls, ctx: PolyContext, size: int, order: Optional[int] = None) -> "MatOverSeries":
        return cls.from_blocks(ctx, np.eye(size * ctx.q), order)

    @classmethod
    def from_blocks(cls, ctx: PolyContext, big: np.ndarray, order: Optional[int] = None) -> "MatOverSeries":
        """pq×pq 复矩阵 -> M_p(B)，第 (i, j) 个 q×q 块为 (i, j) 元"""
        big = np.asarray(big, dtype=complex)
        q = ctx.q
        if big.ndim != 2 or big.shape[0] != big.shape[1] or big.shape[0] % q:
            raise SizeMismatchError(f"square multiple of q={q}", big.shape, "block matrix")
        p = big.shape[0] // q
        return cls(
            [[from_matrix(ctx, big[i * q:(i + 1) * q, j * q:(j + 1) * q]) for j in range(p)] for i in range(p)],
            order,
        )

    @classmethod
    def variable_diag(cls, ctx: PolyContext, size: int, var: int, order: Optional[int] = None) -> "MatOverSeries":
        """X_var ⊗ I_p"""
        x = variable(ctx, var)
        z = zero(ctx)
        return cls([[x if i == j else z for j in range(size)] for i in range(size)], order)

    # ---------- 视图 ----------

    def entry(self, i: int, j: int) -> NCPoly:
        return self._entries[i][j]

    @property
    def entries(self):
        return self._entries

    def degree0(self) -> np.ndarray:
        """0 次部分，pq×pq 复矩阵"""
        q = self.ctx.q
        out = np.zeros((self.size * q, self.size * q), dtype=complex)
        for i, row in enumerate(self._entries):
            for j, e in enumerate(row):
                out[i * q:(i + 1) * q, j * q:(j + 1) * q] = e.b_part()
        return out

    def norm(self) -> float:
        return float(sum(e.norm() for row in self._entries for e in row))

    def degree(self) -> int:
        return max(e.degree() for row in self._entries for e in row)

    # ---------- 运算 ----------

    def _check(self, other: "MatOverSeries") -> None:
        check_same_context(self, other)
        if self.size != other.size:
            raise SizeMismatchError(self.size, other.size, "series matrix size")

    def __add__(self, other: "MatOverSeries") -> "MatOverSeries":
        self._check(other)
        return MatOverSeries(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._entries, other._entries)],
            _min_order(self.order, other.order),
        )

    def __sub__(self, other: "MatOverSeries") -> "MatOverSeries":
        self._check(other)
        return MatOverSeries(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self._entries, other._entries)],
            _min_order(self.order, other.order),
        )

    def __neg__(self) -> "MatOverSeries":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "MatOverSeries":
        return MatOverSeries([[e.scale(c) for e in row] for row in self._entries], self.order)

    def __mul__(self, other):
        if isinstance(other, MatOverSeries):
            return self.matmul(other)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def matmul(self, other: "MatOverSeries") -> "MatOverSeries":
        self._check(other)
        order = _min_order(self.order, other.order)
        p = self.size
        out: List[List[NCPoly]] = []
        for i in range(p):
            row = []
            for k in range(p):
                acc = zero(self.ctx)
                for j in range(p):
                    acc = acc + mul(self._entries[i][j], other._entries[j][k], max_degree=order)
                row.append(acc)
            out.append(row)
        return MatOverSeries(out, order)

    def star(self) -> "MatOverSeries":
        """(α*)_ij = (α_ji)*"""
        p = self.size
        return MatOverSeries([[self._entries[j][i].star() for j in range(p)] for i in range(p)], self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatOverSeries):
            return False
        return (
            self.ctx == other.ctx and self.size == other.size and self.order == other.order
            and all(a == b for ra, rb in zip(self._entries, other._entries) for a, b in zip(ra, rb))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"MatOverSeries(p={self.size}, q={self.ctx.q}, order={self.order})"


# ---------- 求逆 ----------

def series_invert(a: MatOverSeries, cond_max: float = SERIES_COND_MAX) -> MatOverSeries:
    """Neumann 求逆: a⁻¹ = Σ_{k≤D} (−a₀⁻¹ r)^k a₀⁻¹，r = a − a₀

    Raises:
        SeriesInversionError: 0 次部分奇异或条件数超过 cond_max
        ValueError: 未截断的多项式矩阵（order=None）
    """
    if a.order is None:
        raise ValueError("series_invert needs a truncation order")
    a0 = a.degree0()
    cond = float(np.linalg.cond(a0))
    if not np.isfinite(cond) or cond > cond_max:
        raise SeriesInversionError(cond, cond_max)
    inv0 = MatOverSeries.from_blocks(a.ctx, np.linalg.inv(a0), a.order)
    step = -(inv0 * (a - MatOverSeries.from_blocks(a.ctx, a0, a.order)))
    term = inv0
    total = inv0
    for _ in range(a.order):
        term = step * term
        total = total + term
    log.debug("series_invert: p=%d D=%d cond=%.3e", a.size, a.order, cond)
    return total


# ---------- 余表示 ----------

def corep_residual(alpha: MatOverSeries, i: int) -> List[List[TensorPoly]]:
    """逐元素 ∂_i a_ik − Σ_j a_ij ⊗ a_jk（总次数 ≤ D−1）"""
    limit = None if alpha.order is None else alpha.order - 1
    p = alpha.size
    out = []
    for r in range(p):
        row = []
        for k in range(p):
            lhs = partial_dq(i, alpha.entry(r, k))
            if limit is not None:
                lhs = lhs.truncate(limit)
            for j in range(p):
                lhs = lhs - tensor(alpha.entry(r, j), alpha.entry(j, k), max_degree=limit)
            row.append(lhs)
        out.append(row)
    return out


def corep_defect(alpha: MatOverSeries, i: int) -> float:
    """余表示缺陷：所有元素残差的系数模之和"""
    return float(sum(t.norm() for row in corep_residual(alpha, i) for t in row))


def corep_build(
    kind: str,
    params: Mapping[str, Any],
    ctx: PolyContext,
    order: int,
    var: int = 0,
) -> MatOverSeries:
    """构造余表示

    Args:
        kind: resolvent | sandwich | moebius_left | moebius_right
        params: resolvent -> {"n"}; sandwich -> {"beta1", "beta2", "beta3"}
                （均为 pq×pq 复矩阵，即 M_p(B) 元素）；
                moebius_* -> {"xi": MatOverSeries, "beta": pq×pq 复矩阵}
        ctx: 多项式上下文
        order: 截断阶 D
        var: 使用的变量下标

    Raises:
        SeriesInversionError: 需要求逆的矩阵 0 次部分不可逆
        ValueError: 未知 kind
    """
    if kind not in COREP_KINDS:
        raise ValueError(f"Unknown corepresentation kind: {kind}. Available: {list(COREP_KINDS)}")
    block = lambda m: MatOverSeries.from_blocks(ctx, m, order)
    if kind == "resolvent":
        n = block(params["n"])
        return series_invert(n - MatOverSeries.variable_diag(ctx, n.size, var, order))
    if kind == "sandwich":
        b1, b2, b3 = block(params["beta1"]), block(params["beta2"]), block(params["beta3"])
        x = MatOverSeries.variable_diag(ctx, b1.size, var, order)
        return b3 * series_invert(b2 - b1 * x * b3) * b1
    xi: MatOverSeries = params["xi"]
    beta = block(params["beta"])
    one = MatOverSeries.identity(ctx, xi.size, order)
    if kind == "moebius_left":
        return series_invert(one - xi * beta) * xi
    return xi * series_invert(one - beta * xi)


def check_corep_laws(config: SamplerConfig) -> List[LawReport]:
    """余表示套件：求逆、三类构造、Möbius 对称、单位矩阵反例"""
    ctx = config.context()
    rng = config.rng("corep")
    tol = config.numeric
    q = ctx.q

    tracks: Dict[str, DefectTracker] = {
        name: DefectTracker(name, tol)
        for name in ("invert_two_sided", "corep_resolvent", "corep_sandwich",
                     "corep_moebius_left", "corep_moebius_right", "moebius_symmetry")
    }
    for _ in range(config.series_samples):
        p = int(rng.integers(1, config.series_size + 1))
        D = int(rng.integers(1, config.order + 1))
        var = int(rng.integers(0, ctx.n))
        pq = p * q
        n = random_gl(rng, pq, low=1.0, high=2.0)
        beta1 = random_matrix(rng, pq, pq, 0.5 / np.sqrt(pq))
        beta2 = random_gl(rng, pq, low=1.0, high=2.0)
        beta3 = random_matrix(rng, pq, pq, 0.5 / np.sqrt(pq))
        beta = random_matrix(rng, pq, pq, 0.5 / np.sqrt(pq))
        witness = lambda: {
            "p": p, "D": D, "var": var,
            "n": encode_matrix(n), "beta": encode_matrix(beta),
            "beta1": encode_matrix(beta1), "beta2": encode_matrix(beta2), "beta3": encode_matrix(beta3),
        }

        a = MatOverSeries.from_blocks(ctx, n, D) - MatOverSeries.variable_diag(ctx, p, var, D)
        extra = MatOverSeries(
            [[variable(ctx, var) * from_matrix(ctx, random_matrix(rng, q, q, 0.3)) * variable(ctx, var)
              for _ in range(p)] for _ in range(p)],
            D,
        )
        a = a + extra
        inv = series_invert(a)
        one = MatOverSeries.identity(ctx, p, D)
        tracks["invert_two_sided"].add(((a * inv) - one).norm() + ((inv * a) - one).norm(), witness)

        xi = corep_build("resolvent", {"n": n}, ctx, D, var)
        tracks["corep_resolvent"].add(corep_defect(xi, var), witness)
        sandwich = corep_build("sandwich", {"beta1": beta1, "beta2": beta2, "beta3": beta3}, ctx, D, var)
        tracks["corep_sandwich"].add(corep_defect(sandwich, var), witness)
        left = corep_build("moebius_left", {"xi": xi, "beta": beta}, ctx, D, var)
        tracks["corep_moebius_left"].add(corep_defect(left, var), witness)
        right_adj = corep_build("moebius_right", {"xi": xi.star(), "beta": beta.conj().T}, ctx, D, var)
        right_defect = corep_defect(right_adj, var)
        tracks["corep_moebius_right"].add(right_defect, witness)
        tracks["moebius_symmetry"].add(
            (right_adj - left.star()).norm() + abs(right_defect - corep_defect(left, var)), witness
        )

    unit_track = DefectTracker("unit_not_corep", tol)
    for p in range(1, config.series_size + 1):
        got = corep_defect(MatOverSeries.identity(ctx, p, config.order), 0)
        unit_track.add(abs(got - p * q * q), lambda: {"p": p, "q": q, "defect": got})
    reports = [t.report() for t in tracks.values()]
    reports.append(unit_track.report(expected="p·q²"))
    log.info("corep: %d laws, %d failed", len(reports), sum(not r.passed for r in reports))
    return reports
