"""
fmdq.py - 全矩阵差商 ∂_{m,n}

对全矩阵函数 f，在块上三角点
    X = [[g', h⊗1], [0, g'']] ∈ Ω_{m+n}
处求值，右上角块对 h 线性，正是 ∂_{m,n} f(g', g'') 作用在 h 上的像。
因此差商只需一次求值即可精确得到，不做有限差分。

二阶差商用 3×3 块点
    [[g, h₁⊗1, 0], [0, g', h₂⊗1], [0, 0, g'']]
的 (1,3) 角块：该角块对 (h₁, h₂) 双线性。另一复合顺序由一阶 dq_block 在左块点上迭代得到，
两者的一致性是一条独立检查。

α-形式（仅 H = ℂ）：ξ ∈ M_m⊗M_n 存为 mn×mn 矩阵，
e_ij⊗e_kl 的系数位于 (i·n+k, j·n+l)，α(ξ)(c) = Σ ξ_(ij)(kl) e_ij c e_kl。

使用示例:
    from gdq_atlas.matricial.fmdq import dq_block, nabla, dq2_block

    f = FuncCalc.polynomial([0, 0, 1])               # z²
    cm = dq_block(f, np.array([[1]]), np.array([[3]]))
    cm.alpha_form()                                  # [[4]]
    nabla(f, np.array([[0.5]])).apply(np.eye(1))     # [[1.0]]
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg

from ..contracts.conventions import FD_STEP, FD_TOL, VALUE_SPACE_SCALAR
from ..contracts.errors import DomainViolationError, NonFullyMatricialError, SizeMismatchError, ValueSpaceError
from ..laws.report import DefectTracker, LawReport
from ..laws.sampling import SamplerConfig, random_gl, random_matrix
from .fm import FMFunc, FuncCalc, blocks_of, fm_combine, upper_block

log = logging.getLogger(__name__)

DIAGONAL_TOL = 1e-8
DILATION = (2.0, 0.75)
CLASSICAL_PAIRS = 50
CLASSICAL_MIN_GAP = 0.1


@dataclass(frozen=True)
class CornerMap:
    """线性映射 M_{m,n}(ℂ) → M_{m,n}(H)，按矩阵单位的像存储

    Attributes:
        m, n: 角块尺寸
        block_out: H 的块尺寸
        value_space: H 的标签
        images: 形状 (m, n, m·block_out, n·block_out)，images[j, k] 为 e_jk 的像
    """
    m: int
    n: int
    block_out: int
    value_space: str
    images: np.ndarray

    def apply(self, h: np.ndarray) -> np.ndarray:
        h = np.asarray(h)
        if h.shape != (self.m, self.n):
            raise SizeMismatchError((self.m, self.n), h.shape, "corner input")
        return np.einsum("jk,jkab->ab", h, self.images)

    @classmethod
    def from_linear_map(cls, fn: Callable[[np.ndarray], np.ndarray], m: int, n: int) -> "CornerMap":
        """由标量线性映射构造（H = ℂ）"""
        images = np.zeros((m, n, m, n), dtype=complex)
        for j in range(m):
            for k in range(n):
                e = np.zeros((m, n), dtype=complex)
                e[j, k] = 1
                images[j, k] = fn(e)
        return cls(m, n, 1, VALUE_SPACE_SCALAR, images)

    @property
    def is_square(self) -> bool:
        return self.m == self.n

    def norm(self) -> float:
        return float(np.abs(self.images).max()) if self.images.size else 0.0

    def alpha_form(self) -> np.ndarray:
        """α⁻¹：单位像表 -> M_m⊗M_n 中的 mn×mn 矩阵

        Raises:
            ValueSpaceError: H ≠ ℂ
        """
        if self.block_out != 1:
            raise ValueSpaceError(VALUE_SPACE_SCALAR, self.value_space)
        return self.images.transpose(2, 1, 0, 3).reshape(self.m * self.n, self.m * self.n)

    def direct_sum_rows(self, other: "CornerMap") -> "CornerMap":
        """M_{m₁,n} 与 M_{m₂,n} 上的映射拼成 M_{m₁+m₂,n} 上的块对角映射"""
        if self.n != other.n or self.block_out != other.block_out:
            raise SizeMismatchError((self.n, self.block_out), (other.n, other.block_out), "row direct sum")
        m, bo = self.m + other.m, self.block_out
        images = np.zeros((m, self.n, m * bo, self.n * bo), dtype=complex)
        images[: self.m, :, : self.m * bo, :] = self.images
        images[self.m:, :, self.m * bo:, :] = other.images
        return CornerMap(m, self.n, bo, self.value_space, images)

    def direct_sum_cols(self, other: "CornerMap") -> "CornerMap":
        if self.m != other.m or self.block_out != other.block_out:
            raise SizeMismatchError((self.m, self.block_out), (other.m, other.block_out), "column direct sum")
        n, bo = self.n + other.n, self.block_out
        images = np.zeros((self.m, n, self.m * bo, n * bo), dtype=complex)
        images[:, : self.n, :, : self.n * bo] = self.images
        images[:, self.n:, :, self.n * bo:] = other.images
        return CornerMap(self.m, n, bo, self.value_space, images)


def alpha_apply(xi: np.ndarray, c: np.ndarray, m: int, n: int) -> np.ndarray:
    """(α(ξ))(c) = Σ ξ_(ij)(kl) e_ij c e_kl，c ∈ M_{m,n}"""
    return np.einsum("ikjl,jk->il", np.asarray(xi).reshape(m, n, m, n), c)


def _corner(f: FMFunc, top: np.ndarray, bottom: np.ndarray, corner: np.ndarray) -> np.ndarray:
    m = top.shape[0] // f.domain.block
    value = f.evaluate(upper_block(top, corner, bottom))
    return blocks_of(value, m, f.block_out)[1]


def corner_image(f: FMFunc, g1: np.ndarray, g2: np.ndarray, h: np.ndarray) -> np.ndarray:
    """∂f(g', g'') 作用在任意 h ∈ M_{m,n}(ℂ) 上的像（单次求值）"""
    return _corner(f, g1, g2, np.kron(h, np.eye(f.domain.block)))


def dq_block(f: FMFunc, g1: np.ndarray, g2: np.ndarray) -> CornerMap:
    """∂_{m,n} f(g', g'')，逐个矩阵单位提取右上角块

    Raises:
        DomainViolationError: 块点不在定义域
        NonFullyMatricialError: 对角块与 f(g')、f(g'') 不符
    """
    omega = f.domain
    m, n = omega.size_of(g1), omega.size_of(g2)
    bo = f.block_out
    f1, f2 = f.evaluate(g1), f.evaluate(g2)
    images = np.zeros((m, n, m * bo, n * bo), dtype=complex)
    worst = 0.0
    for j in range(m):
        for k in range(n):
            value = f.evaluate(upper_block(g1, omega.unit_corner(m, n, j, k), g2))
            top, corner, _, bottom = blocks_of(value, m, bo)
            scale = max(1.0, np.linalg.norm(value, 2))
            worst = max(worst, np.linalg.norm(top - f1, 2) / scale, np.linalg.norm(bottom - f2, 2) / scale)
            images[j, k] = corner
    if worst > DIAGONAL_TOL:
        raise NonFullyMatricialError(worst, DIAGONAL_TOL)
    log.debug("dq_block m=%d n=%d diag_defect=%.2e", m, n, worst)
    return CornerMap(m, n, bo, f.value_space, images)


def nabla(f: FMFunc, g: np.ndarray) -> CornerMap:
    """∇f(g, g*) = α∂f(g, g*) 作为 M_n → M_n 的映射

    Raises:
        ValueSpaceError: H ≠ ℂ
        DomainViolationError: g* 不在定义域
    """
    if f.value_space != VALUE_SPACE_SCALAR:
        raise ValueSpaceError(VALUE_SPACE_SCALAR, f.value_space)
    g_adj = np.asarray(g).conj().T
    if not f.domain.contains(g_adj):
        raise DomainViolationError(f.domain.size_of(g_adj), "adjoint point outside the domain")
    return dq_block(f, g, g_adj)


def dq2_block(f: FMFunc, g: np.ndarray, g1: np.ndarray, g2: np.ndarray) -> Dict[str, np.ndarray]:
    """二阶差商的两种复合顺序

    left  = (∂⊗id)∂f：对每个 e_ab 在左块点 [[g, e_ab⊗1], [0, g']] 上取一阶差商
            dq_block(·, g'')，再读出其中 h₂ = e_cd 所在的行块
    right = (id⊗∂)∂f：在 [[g, s·e_ab⊗1, 0], [0, g', t·e_cd⊗1], [0, 0, g'']] 上单次求值，
            (1,3) 角块除以 s·t（s, t 取 DILATION）

    Returns:
        {"left": ..., "right": ...}，每个数组形状 (m, n, n, p, m·bo, p·bo)，[a, b, c, d] 对应 h₁ = e_ab, h₂ = e_cd

    Raises:
        NonFullyMatricialError: 一阶差商的对角块与 f 的值不符
    """
    omega = f.domain
    m, n, p = omega.size_of(g), omega.size_of(g1), omega.size_of(g2)
    bo = f.block_out
    s, t = DILATION
    left = np.zeros((m, n, n, p, m * bo, p * bo), dtype=complex)
    right = np.zeros_like(left)

    for a in range(m):
        for b in range(n):
            inner = dq_block(f, upper_block(g, omega.unit_corner(m, n, a, b), g1), g2)
            left[a, b] = inner.images[m:, :, : m * bo, :]

    for c in range(n):
        for d in range(p):
            g12 = upper_block(g1, t * omega.unit_corner(n, p, c, d), g2)
            for a in range(m):
                for b in range(n):
                    h = np.zeros((m, n + p), dtype=complex)
                    h[a, b] = s
                    right[a, b, c, d] = corner_image(f, g, g12, h)[:, n * bo:] / (s * t)
    return {"left": left, "right": right}


def fd_second_order(f: FMFunc, g: np.ndarray, g1: np.ndarray, g2: np.ndarray,
                    h1: np.ndarray, h2: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """混合中心差分 ∂²/∂ε₁∂ε₂ f(g⊕g'⊕g'' + ε₁H₁ + ε₂H₂) 的 (1,3) 角块"""
    omega = f.domain
    blk, bo = omega.block, f.block_out
    m, n, p = omega.size_of(g), omega.size_of(g1), omega.size_of(g2)
    base = linalg.block_diag(g, g1, g2).astype(complex)
    e1 = np.zeros_like(base)
    e2 = np.zeros_like(base)
    e1[: m * blk, m * blk:(m + n) * blk] = np.kron(h1, np.eye(blk))
    e2[m * blk:(m + n) * blk, (m + n) * blk:] = np.kron(h2, np.eye(blk))
    total = np.zeros((m * bo, p * bo), dtype=complex)
    for s1, s2, sign in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)):
        value = f.evaluate(base + s1 * step * e1 + s2 * step * e2)
        total += sign * value[: m * bo, (m + n) * bo:]
    return total / (4 * step * step)


# ---------- 定律检查 ----------

def _rel(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(1.0, float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    return float(np.abs(a - b).max(initial=0.0) / scale)


def classical_pairs(f: FuncCalc, rng: np.random.Generator, count: int = CLASSICAL_PAIRS,
                    min_gap: float = CLASSICAL_MIN_GAP) -> List[Tuple[complex, complex]]:
    """区域内 count 对相距 > min_gap 的标量点，过近的对重抽"""
    pairs: List[Tuple[complex, complex]] = []
    for _ in range(20 * count):
        if len(pairs) == count:
            break
        z1, z2 = f.region.sample(rng), f.region.sample(rng)
        if abs(z1 - z2) > min_gap:
            pairs.append((z1, z2))
    if len(pairs) < count:
        log.warning("classical_pairs: only %d of %d pairs with gap > %.2f", len(pairs), count, min_gap)
    return pairs


def check_dq_laws(f: FMFunc, config: SamplerConfig, other: Optional[FMFunc] = None,
                  label: Optional[str] = None) -> List[LawReport]:
    """差商套件：Leibniz、等变性、左右直和分裂、二阶顺序一致、经典差商、角块线性、α 往返、有限差分"""
    name = lambda law: f"{law}:{label}" if label else law
    rng = config.rng(name("dq"))
    tol = config.loose
    omega = f.domain
    bo = f.block_out
    other = other or f
    product = fm_combine("mul", f, other)
    max_size = min(config.max_size, 3)
    scalar_valued = f.value_space == VALUE_SPACE_SCALAR

    laws = ("dq_leibniz", "dq_equivariance", "dq_split_left", "dq_split_right",
            "dq_order_agreement", "corner_linearity")
    tracks = {law: DefectTracker(name(law), tol) for law in laws}
    classical = DefectTracker(name("classical_quotient"), config.numeric) if isinstance(f, FuncCalc) else None
    alpha = DefectTracker(name("alpha_round_trip"), config.numeric) if scalar_valued else None
    fd = DefectTracker(name("fd_cross_check"), FD_TOL) if config.verify_fd else None

    samples = max(1, config.matricial_samples)
    for _ in range(samples):
        m = int(rng.integers(1, max_size + 1))
        n = int(rng.integers(1, max_size + 1))
        g1, g2 = product.domain.sample(m, rng), product.domain.sample(n, rng)
        w = lambda: {"g1": g1, "g2": g2}

        cm_f = dq_block(f, g1, g2)
        cm_o = dq_block(other, g1, g2)
        cm_p = dq_block(product, g1, g2)
        f1, o2 = f._eval(g1), other._eval(g2)
        expected = np.einsum("ab,jkbc->jkac", f1, cm_o.images) + np.einsum("jkab,bc->jkac", cm_f.images, o2)
        tracks["dq_leibniz"].add(_rel(cm_p.images, expected), w)

        s1, s2 = random_gl(rng, m), random_gl(rng, n)
        moved1 = omega.lift(s1) @ g1 @ np.linalg.inv(omega.lift(s1))
        moved2 = omega.lift(s2) @ g2 @ np.linalg.inv(omega.lift(s2))
        h = random_matrix(rng, m, n)
        lhs = corner_image(f, moved1, moved2, h)
        inner = corner_image(f, g1, g2, np.linalg.inv(s1) @ h @ s2)
        rhs = f.lift_out(s1) @ inner @ np.linalg.inv(f.lift_out(s2))
        tracks["dq_equivariance"].add(
            _rel(lhs, rhs) / (np.linalg.cond(s1) * np.linalg.cond(s2)), lambda: {**w(), "S1": s1, "S2": s2, "h": h}
        )

        g3 = f.domain.sample(1, rng)
        split_l = dq_block(f, linalg.block_diag(g1, g3), g2)
        tracks["dq_split_left"].add(_rel(split_l.images, cm_f.direct_sum_rows(dq_block(f, g3, g2)).images),
                                    lambda: {**w(), "g3": g3})
        split_r = dq_block(f, g1, linalg.block_diag(g2, g3))
        tracks["dq_split_right"].add(_rel(split_r.images, cm_f.direct_sum_cols(dq_block(f, g1, g3)).images),
                                     lambda: {**w(), "g3": g3})

        small = [f.domain.sample(int(rng.integers(1, 3)), rng) for _ in range(3)]
        orders = dq2_block(f, *small)
        tracks["dq_order_agreement"].add(_rel(orders["left"], orders["right"]), lambda: {"points": small})

        base = corner_image(f, g1, g2, h)
        lin = sum(_rel(corner_image(f, g1, g2, lam * h), lam * base) for lam in (2, -1, 1j))
        tracks["corner_linearity"].add(lin, lambda: {**w(), "h": h})

        if alpha is not None:
            xi = cm_f.alpha_form()
            round_trip = max(
                _rel(alpha_apply(xi, np.eye(1, m * n, j * n + k).reshape(m, n), m, n), cm_f.images[j, k])
                for j in range(m) for k in range(n)
            )
            round_trip += _rel(alpha_apply(xi, h, m, n), cm_f.apply(h))
            alpha.add(round_trip, lambda: {**w(), "h": h})

        if fd is not None:
            g, ga, gb = small
            mm, nn, pp = (f.domain.size_of(x) for x in small)
            h1, h2 = random_matrix(rng, mm, nn), random_matrix(rng, nn, pp)
            exact = np.einsum("ab,cd,abcdij->ij", h1, h2, orders["left"])
            approx = fd_second_order(f, g, ga, gb, h1, h2)
            fd.add(_rel(approx, exact), lambda: {"points": small, "h1": h1, "h2": h2})

    if classical is not None:
        for z1, z2 in classical_pairs(f, rng):
            got = dq_block(f, np.array([[z1]]), np.array([[z2]])).alpha_form()[0, 0]
            want = (f.scalar(z1) - f.scalar(z2)) / (z1 - z2)
            classical.add(abs(got - want) / max(1.0, abs(want)), lambda: {"z1": z1, "z2": z2})

    reports = [tracks[law].report() for law in laws]
    for extra in (classical, alpha, fd):
        if extra is not None:
            reports.append(extra.report())
    log.info("dq[%s]: %d laws, %d failed", label or "-", len(reports), sum(not r.passed for r in reports))
    return reports
