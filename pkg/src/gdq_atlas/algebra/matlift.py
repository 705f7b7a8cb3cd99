"""
matlift.py - 𝔐_p(A) = M_p ⊗ A 上的提升差商及其与 D⟨X⟩ 的同构

A = B⟨X_0, …, X_{p²-1}⟩，变量 X_k 重新编号为 X_{ij}，k = i·p + j（0 起）。
𝔐_p(A) 的元素用 MatOverSeries(order=None) 表示（p×p 的 NCPoly 矩阵）。

提升差商:
    ∂(e_rs ⊗ a) = Σ_{i,j} (e_ri ⊗ e_js) ⊗ ∂_ij a
    Δ_ij = Σ_k e_ki ⊗ e_jk,  (T⊗I_p)Δ_ij = Δ_ij(I_p⊗T)

同构 Φ: D⟨X⟩ → 𝔐_p(A)，D = M_p ⊗ B = M_{pq}，X ↦ Y = Σ e_ij ⊗ X_ij，d ↦ d。
D⟨X⟩ 在单变量上下文 PolyContext(q=p·q, n=1) 中计算，D 的行列下标 (a, r) ↦ a·q + r。

使用示例:
    from gdq_atlas.algebra.matlift import LiftContext, lift_dq, lift_y

    lctx = LiftContext(p=2, q=1)
    t = lift_dq(lctx, lift_y(lctx))    # (I_p⊗1) ⊗ (I_p⊗1)
    t.apply_lift(lctx, leg=0)          # (∂ ⊗ id) ∂Y = 0

    phi, report = dx_isomorphism(lctx, SamplerConfig(seed=3))
    phi(variable(phi.d_ctx, 0))        # == lift_y(lctx)
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..contracts.errors import SizeMismatchError
from ..laws.report import DefectTracker, LawReport
from ..laws.sampling import SamplerConfig, random_b, random_matrix, random_poly, split_degrees
from .ncpoly import NCPoly, PolyContext, _accumulate, check_same_context, unit, variable, zero
from .series import MatOverSeries
from .tensor import TensorPoly, tensor

log = logging.getLogger(__name__)

MatIndex = Tuple[int, ...]


@dataclass(frozen=True)
class LiftContext:
    """提升上下文

    Attributes:
        p: 外层矩阵尺寸
        q: 系数代数 B = M_q
        weights: 可选 p²×p² 可逆权重矩阵 W，∂'_k = Σ_l W[k, l] ∂_l（默认单位阵）
    """
    p: int
    q: int = 1
    weights: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"Lift size p must be >= 1, got {self.p}")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=complex)
            if w.shape != (self.p ** 2, self.p ** 2):
                raise SizeMismatchError((self.p ** 2, self.p ** 2), w.shape, "lift weights")
            object.__setattr__(self, "weights", w)

    @property
    def base(self) -> PolyContext:
        return PolyContext(q=self.q, n=self.p ** 2)

    @property
    def d_ctx(self) -> PolyContext:
        return PolyContext(q=self.p * self.q, n=1)

    def var(self, i: int, j: int) -> int:
        return i * self.p + j

    def unweighted(self) -> "LiftContext":
        return LiftContext(self.p, self.q)

    def weight_row(self, k: int) -> List[complex]:
        if self.weights is None:
            row = [0] * self.p ** 2
            row[k] = 1
            return row
        return list(self.weights[k])

    def delta(self, i: int, j: int) -> np.ndarray:
        """Δ_ij，kron 约定下的 p²×p² 矩阵"""
        p = self.p
        out = np.zeros((p * p, p * p), dtype=complex)
        for k in range(p):
            out += np.kron(_unit(p, k, i), _unit(p, j, k))
        return out


def _unit(p: int, a: int, b: int) -> np.ndarray:
    e = np.zeros((p, p), dtype=complex)
    e[a, b] = 1
    return e


def _check_base(lctx: LiftContext, ctx: PolyContext) -> None:
    if ctx != lctx.base:
        raise SizeMismatchError(lctx.base, ctx, "lift base context")


class MatTensor:
    """𝔐_p(A)^{⊗k} 中的元素（不可变）

    键为 2k 个外层矩阵下标 (a_1, b_1, …, a_k, b_k)，值为 k 阶 TensorPoly，
    表示 Σ (e_{a_1 b_1} ⊗ x_1) ⊗ … ⊗ (e_{a_k b_k} ⊗ x_k)。
    """
    __slots__ = ("ctx", "order", "_parts")

    def __init__(self, ctx: PolyContext, order: int, parts: Optional[Mapping[MatIndex, TensorPoly]] = None):
        cleaned: Dict[MatIndex, TensorPoly] = {}
        for key, t in (parts or {}).items():
            if len(key) != 2 * order or t.order != order:
                raise SizeMismatchError(order, (len(key), t.order), "mat tensor legs")
            check_same_context(t, TensorPoly.zero(ctx, order))
            if not t.is_zero():
                cleaned[tuple(int(i) for i in key)] = t
        self.ctx = ctx
        self.order = order
        self._parts = cleaned

    @property
    def parts(self) -> Mapping[MatIndex, TensorPoly]:
        return dict(self._parts)

    def is_zero(self) -> bool:
        return not self._parts

    def norm(self) -> float:
        return float(sum(t.norm() for t in self._parts.values()))

    def _merge(self, other: "MatTensor", sign: int) -> "MatTensor":
        check_same_context(self, other)
        if self.order != other.order:
            raise SizeMismatchError(self.order, other.order, "mat tensor order")
        out = dict(self._parts)
        for k, t in other._parts.items():
            t = t if sign > 0 else -t
            out[k] = out[k] + t if k in out else t
        return MatTensor(self.ctx, self.order, out)

    def __add__(self, other: "MatTensor") -> "MatTensor":
        return self._merge(other, 1)

    def __sub__(self, other: "MatTensor") -> "MatTensor":
        return self._merge(other, -1)

    def scale(self, c) -> "MatTensor":
        return MatTensor(self.ctx, self.order, {k: t.scale(c) for k, t in self._parts.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, MatTensor) and (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        return f"MatTensor(order={self.order}, blocks={sorted(self._parts)})"

    def mul_leg(
        self,
        leg: int,
        left: Optional[MatOverSeries] = None,
        right: Optional[MatOverSeries] = None,
    ) -> "MatTensor":
        """第 leg 条腿左乘 left、右乘 right（𝔐_p(A) 元素）"""
        out = self
        if right is not None:
            out = out._mul(leg, right, side="right")
        if left is not None:
            out = out._mul(leg, left, side="left")
        return out

    def _mul(self, leg: int, m: MatOverSeries, side: str) -> "MatTensor":
        check_same_context(self, m)
        out: Dict[MatIndex, TensorPoly] = {}
        for key, t in self._parts.items():
            a, b = key[2 * leg], key[2 * leg + 1]
            for c in range(m.size):
                poly = m.entry(b, c) if side == "right" else m.entry(c, a)
                if poly.is_zero():
                    continue
                if side == "right":
                    new = key[:2 * leg] + (a, c) + key[2 * leg + 2:]
                    piece = t.mul_leg(leg, right=poly)
                else:
                    new = key[:2 * leg] + (c, b) + key[2 * leg + 2:]
                    piece = t.mul_leg(leg, left=poly)
                out[new] = out[new] + piece if new in out else piece
        return MatTensor(self.ctx, self.order, out)

    def apply_lift(self, lctx: LiftContext, leg: int = 0) -> "MatTensor":
        """在第 leg 条腿上施加提升差商 ∂，阶数加一"""
        _check_base(lctx, self.ctx)
        p = lctx.p
        out: Dict[MatIndex, TensorPoly] = {}
        for key, t in self._parts.items():
            a, b = key[2 * leg], key[2 * leg + 1]
            for i in range(p):
                for j in range(p):
                    piece = t.apply_combo(lctx.weight_row(lctx.var(i, j)), leg)
                    if piece.is_zero():
                        continue
                    new = key[:2 * leg] + (a, i, j, b) + key[2 * leg + 2:]
                    out[new] = out[new] + piece if new in out else piece
        return MatTensor(self.ctx, self.order + 1, out)


def as_mat_tensor(m: MatOverSeries) -> MatTensor:
    """𝔐_p(A) -> 1 阶 MatTensor"""
    return MatTensor(
        m.ctx, 1,
        {(r, s): TensorPoly.from_poly(m.entry(r, s)) for r in range(m.size) for s in range(m.size)},
    )


def lift_dq(lctx: LiftContext, m: MatOverSeries, form: str = "left") -> MatTensor:
    """提升差商 ∂m

    form="left" 用 (T⊗I_p)Δ_ij，form="right" 用 Δ_ij(I_p⊗T)；
    T 取遍矩阵单位 e_rs，Δ 形式的系数在 kron 下标 (a·p+c, b·p+d) 处读出 e_ab ⊗ e_cd。

    Raises:
        SizeMismatchError: 尺寸或变量数与提升上下文不符
        ValueError: 未知 form
    """
    _check_base(lctx, m.ctx)
    if m.size != lctx.p:
        raise SizeMismatchError(lctx.p, m.size, "lift matrix size")
    if form not in ("left", "right"):
        raise ValueError(f"Unknown delta form: {form}")
    p = lctx.p
    ident = np.eye(p)
    out: Dict[MatIndex, TensorPoly] = {}
    for r in range(p):
        for s in range(p):
            a_poly = m.entry(r, s)
            if a_poly.is_zero():
                continue
            t = TensorPoly.from_poly(a_poly)
            T = _unit(p, r, s)
            for i in range(p):
                for j in range(p):
                    d = t.apply_combo(lctx.weight_row(lctx.var(i, j)), 0)
                    if d.is_zero():
                        continue
                    delta = lctx.delta(i, j)
                    coeffs = np.kron(T, ident) @ delta if form == "left" else delta @ np.kron(ident, T)
                    for row, col in zip(*np.nonzero(coeffs)):
                        key = (row // p, col // p, row % p, col % p)
                        piece = d.scale(coeffs[row, col])
                        out[key] = out[key] + piece if key in out else piece
    return MatTensor(m.ctx, 2, out)


def lift_y(lctx: LiftContext) -> MatOverSeries:
    """Y = Σ e_ij ⊗ X_ij"""
    ctx = lctx.base
    return MatOverSeries(
        [[variable(ctx, lctx.var(i, j)) for j in range(lctx.p)] for i in range(lctx.p)]
    )


def scalar_lift(lctx: LiftContext, big: np.ndarray) -> MatOverSeries:
    """M_p ⊗ B 中的元素（pq×pq 复矩阵）"""
    return MatOverSeries.from_blocks(lctx.base, big)


def random_lift_element(lctx: LiftContext, rng: np.random.Generator, max_degree: int, max_terms: int = 2) -> MatOverSeries:
    ctx = lctx.base
    return MatOverSeries(
        [[random_poly(ctx, rng, max_degree, max_terms) if rng.random() < 0.6 else zero(ctx)
          for _ in range(lctx.p)] for _ in range(lctx.p)]
    )


# ---------- D⟨X⟩ 同构 ----------

class DXMap:
    """Φ: D⟨X⟩ → 𝔐_p(A)，X ↦ Σ e_ij ⊗ X_ij，D ∋ d ↦ d"""

    def __init__(self, lctx: LiftContext):
        self.lctx = lctx.unweighted()
        self.d_ctx = lctx.d_ctx
        self.base = lctx.base

    def __call__(self, u: NCPoly) -> MatOverSeries:
        check_same_context(u, zero(self.d_ctx))
        parts = self.on_tensor(TensorPoly.from_poly(u)).parts
        p = self.lctx.p
        entries = [
            [parts[(a, b)] if (a, b) in parts else TensorPoly.zero(self.base, 1) for b in range(p)]
            for a in range(p)
        ]
        return MatOverSeries([[_leg_poly(t) for t in row] for row in entries])

    def on_tensor(self, t: TensorPoly) -> MatTensor:
        """Φ^{⊗k}：逐腿应用 Φ

        D 的单位 E_{(a,r),(b,s)} = e_ab ⊗ E_rs；单词 d_0 X d_1 … X d_m 映为
        e_{a_0 b_m} ⊗ E_{r_0 s_0} X_{k_1} … X_{k_m} E_{r_m s_m}，其中 k_t = b_{t-1}·p + a_t。
        """
        check_same_context(t, TensorPoly.zero(self.d_ctx, t.order))
        p, q = self.lctx.p, self.lctx.q
        buckets: Dict[MatIndex, Dict] = {}
        for key, arr in t.components.items():
            units = sum(len(w) + 1 for w in key)
            split = arr.reshape((p, q) * (2 * units))
            for outer in itertools.product(range(p), repeat=2 * units):
                index = tuple(x for o in outer for x in (o, slice(None)))
                block = split[index]
                if not block.any():
                    continue
                mat_key: List[int] = []
                new_key: List[Tuple[int, ...]] = []
                pos = 0
                for letters in key:
                    m = len(letters)
                    a = outer[2 * pos: 2 * (pos + m + 1): 2]
                    b = outer[2 * pos + 1: 2 * (pos + m + 1): 2]
                    mat_key.extend((a[0], b[m]))
                    new_key.append(tuple(b[u] * p + a[u + 1] for u in range(m)))
                    pos += m + 1
                _accumulate(buckets.setdefault(tuple(mat_key), {}), tuple(new_key), block)
        return MatTensor(
            self.base, t.order,
            {k: TensorPoly(self.base, t.order, comp) for k, comp in buckets.items()},
        )


def _leg_poly(t: TensorPoly) -> NCPoly:
    return NCPoly(t.ctx, {key[0]: arr for key, arr in t.components.items()})


def dx_isomorphism(lctx: LiftContext, config: SamplerConfig) -> Tuple[DXMap, LawReport]:
    """构造 Φ 并检查：Φ 固定 D、Φ(X) = Y、乘法性、lift_dq∘Φ = (Φ⊗Φ)∘∂_X"""
    phi = DXMap(lctx)
    d_ctx = phi.d_ctx
    rng = config.rng("lift:dx")
    track = DefectTracker("dx_isomorphism", config.exact)
    x = variable(d_ctx, 0)
    budget = min(config.max_degree, 3)
    track.add((phi(x) - lift_y(phi.lctx)).norm(), lambda: {"case": "X"})
    for _ in range(max(1, config.samples // 10)):
        d = random_b(d_ctx, rng)
        track.add((phi(d) - scalar_lift(phi.lctx, d.b_part())).norm(), lambda: {"d": d.to_json()})
        d1, d2 = split_degrees(rng, budget, 2)
        u = random_poly(d_ctx, rng, d1, 2)
        v = random_poly(d_ctx, rng, d2, 2)
        w = lambda: {"u": u.to_json(), "v": v.to_json()}
        track.add((phi(u * v) - phi(u).matmul(phi(v))).norm(), w)
        lhs = lift_dq(phi.lctx, phi(u))
        rhs = phi.on_tensor(TensorPoly.from_poly(u).apply_dq(0, 0))
        track.add((lhs - rhs).norm(), w)
    return phi, track.report()


# ---------- 定律检查 ----------

def check_lift_laws(config: SamplerConfig, lctx: Optional[LiftContext] = None) -> List[LawReport]:
    """提升套件：Δ 交换关系、两种 Δ 形式、Leibniz、余结合、核、∂Y、D⟨X⟩ 同构"""
    lctx = lctx or LiftContext(p=config.lift_p, q=config.q)
    rng = config.rng("lift")
    tol = config.exact
    p = lctx.p
    budget = min(config.max_degree, 4)

    names = ("delta_intertwining", "delta_forms", "lift_leibniz", "lift_coassociativity", "lift_kernel", "lift_y")
    tracks: Dict[str, DefectTracker] = {name: DefectTracker(name, tol) for name in names}
    tracks["delta_intertwining"] = DefectTracker("delta_intertwining", config.numeric)

    rounds = max(1, config.samples // 10)
    ident = np.eye(p)
    for _ in range(rounds):
        T = random_matrix(rng, p, p)
        tracks["delta_intertwining"].add(
            sum(
                np.abs(np.kron(T, ident) @ lctx.delta(i, j) - lctx.delta(i, j) @ np.kron(ident, T)).sum()
                for i in range(p) for j in range(p)
            ),
            lambda: {"T": T},
        )

        d1, d2 = split_degrees(rng, budget, 2)
        m = random_lift_element(lctx, rng, d1)
        n = random_lift_element(lctx, rng, d2)
        w = lambda: {
            "m": [[e.to_json() for e in row] for row in m.entries],
            "n": [[e.to_json() for e in row] for row in n.entries],
        }
        dm = lift_dq(lctx, m)
        tracks["delta_forms"].add((dm - lift_dq(lctx, m, form="right")).norm(), w)
        leibniz_rhs = dm.mul_leg(1, right=n) + lift_dq(lctx, n).mul_leg(0, left=m)
        tracks["lift_leibniz"].add((lift_dq(lctx, m.matmul(n)) - leibniz_rhs).norm(), w)
        tracks["lift_coassociativity"].add(
            (dm.apply_lift(lctx, 0) - dm.apply_lift(lctx, 1)).norm(), w
        )

        kernel = scalar_lift(lctx, random_matrix(rng, p * lctx.q, p * lctx.q))
        outside = m + lift_y(lctx)
        tracks["lift_kernel"].add(
            lift_dq(lctx, kernel).norm() + (1.0 if lift_dq(lctx, outside).is_zero() else 0.0),
            lambda: {**w(), "kernel": kernel.degree0()},
        )

    expected: Dict[MatIndex, TensorPoly] = {}
    one = unit(lctx.base)
    for a in range(p):
        for c in range(p):
            expected[(a, a, c, c)] = tensor(one, one)
    got = lift_dq(lctx, lift_y(lctx))
    tracks["lift_y"].add((got - MatTensor(lctx.base, 2, expected)).norm(), lambda: {"p": p})

    reports = [tracks[name].report() for name in names]
    if lctx.weights is None:
        _, dx_report = dx_isomorphism(lctx, config)
        reports.append(dx_report)
    log.info("lift: %d laws, %d failed", len(reports), sum(not r.passed for r in reports))
    return reports
