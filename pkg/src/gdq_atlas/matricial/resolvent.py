"""
resolvent.py - 全 B-预解集与预解式

站点 (B, Y)：E = M_d(ℂ)，B 为含单位元的子空间（给定线性无关基），Y ∈ E。
M_n(B) 的元素存为 nd×nd 复矩阵，第 (i, j) 个 d×d 块为 (i, j) 元；
Y⊗I_n 对应 kron(I_n, Y)，S⊗1 对应 kron(S, I_d)。

    ρ_n(Y; B) = {b ∈ M_n(B) : Y⊗I_n − b 可逆}
    R_n(Y; B)(b) = (Y⊗I_n − b)⁻¹

"可逆"的数值含义：条件数 ≤ KAPPA_MAX。

使用示例:
    from gdq_atlas.matricial.resolvent import Site, ResolventPoint, membership, resolve

    site = Site.create([np.eye(2)], np.array([[0, 1], [1, 0]]))
    pt = ResolventPoint.scalar(site, 1, 2.0)
    ok, cond = membership(site, pt)      # (True, 3.0)
    resolve(site, pt)                    # (1/3)·[[-2, -1], [-1, -2]]

    big = pt.direct_sum(pt).conjugate(S)
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..contracts.conventions import (
    KAPPA_MAX, RANK_RTOL, SAMPLE_COND_MAX, decode_matrix, encode_matrix,
)
from ..contracts.errors import (
    NotInResolventSetError, SiteFlagError, SiteValidationError, SizeMismatchError,
)
from ..contracts.fields import BASIS, DIM, FLAGS, IS_ALGEBRA, IS_STAR_CLOSED, Y, Y_SELFADJOINT
from ..laws.report import DefectTracker, LawReport
from ..laws.sampling import SamplerConfig, random_gl, random_hermitian, random_matrix

log = logging.getLogger(__name__)

SPAN_TOL = 1e-9

PointLike = Union["ResolventPoint", np.ndarray]


def _vecs(mats: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack([np.asarray(m, dtype=complex).ravel() for m in mats], axis=1)


def _rank(columns: np.ndarray) -> int:
    if columns.size == 0:
        return 0
    sv = linalg.svdvals(columns)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int((sv > RANK_RTOL * sv[0]).sum())


def _orth(columns: np.ndarray) -> np.ndarray:
    """列空间的标准正交基"""
    u, sv, _ = linalg.svd(columns, full_matrices=False)
    if sv.size == 0 or sv[0] == 0:
        return u[:, :0]
    return u[:, : int((sv > RANK_RTOL * sv[0]).sum())]


@dataclass(frozen=True)
class Site:
    """站点 (B ⊂ E = M_d, Y)

    Attributes:
        d: E 的矩阵尺寸
        basis: B 的线性无关基（含单位元于其张成中）
        y: Y ∈ E
        flags: 已验证的标志 {algebra, star_closed, y_selfadjoint}
    """
    d: int
    basis: Tuple[np.ndarray, ...] = field(compare=False)
    y: np.ndarray = field(compare=False)
    flags: Mapping[str, bool] = field(default_factory=dict, compare=False)

    @classmethod
    def create(
        cls,
        basis: Sequence[np.ndarray],
        y: np.ndarray,
        flags: Optional[Mapping[str, bool]] = None,
    ) -> "Site":
        """校验并构造站点

        声明的标志必须与实际计算一致。

        Raises:
            SiteValidationError: 基不线性无关、单位元不在张成中、尺寸不一致或声明的标志不成立
        """
        y = np.asarray(y, dtype=complex)
        if y.ndim != 2 or y.shape[0] != y.shape[1]:
            raise SiteValidationError(f"Y must be square, got shape {y.shape}")
        d = y.shape[0]
        mats = tuple(np.asarray(b, dtype=complex) for b in basis)
        if not mats:
            raise SiteValidationError("B basis is empty")
        for k, b in enumerate(mats):
            if b.shape != (d, d):
                raise SiteValidationError(f"Basis element {k} has shape {b.shape}, expected {(d, d)}")
        cols = _vecs(mats)
        if _rank(cols) != len(mats):
            raise SiteValidationError(f"B basis of {len(mats)} elements is not linearly independent")
        if not _in_span(cols, np.eye(d)):
            raise SiteValidationError("Identity is not in the span of the B basis")

        computed = {
            IS_ALGEBRA: all(_in_span(cols, a @ b) for a in mats for b in mats),
            IS_STAR_CLOSED: all(_in_span(cols, b.conj().T) for b in mats),
            Y_SELFADJOINT: bool(np.allclose(y, y.conj().T, atol=SPAN_TOL)),
        }
        for name, declared in (flags or {}).items():
            if name not in computed:
                raise SiteValidationError(f"Unknown site flag: {name}")
            if declared and not computed[name]:
                raise SiteValidationError(f"Declared flag '{name}' does not hold")
        return cls(d=d, basis=mats, y=y, flags=computed)

    @classmethod
    def scalar(cls, y: np.ndarray) -> "Site":
        """B = ℂ1"""
        y = np.asarray(y, dtype=complex)
        return cls.create([np.eye(y.shape[0])], y)

    @classmethod
    def full(cls, y: np.ndarray) -> "Site":
        """B = E = M_d"""
        y = np.asarray(y, dtype=complex)
        d = y.shape[0]
        units = []
        for r in range(d):
            for s in range(d):
                e = np.zeros((d, d), dtype=complex)
                e[r, s] = 1
                units.append(e)
        return cls.create(units, y)

    @classmethod
    def diagonal(cls, y: np.ndarray) -> "Site":
        """B = 对角矩阵代数"""
        y = np.asarray(y, dtype=complex)
        d = y.shape[0]
        units = []
        for r in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[r, r] = 1
            units.append(e)
        return cls.create(units, y)

    @property
    def dim_b(self) -> int:
        return len(self.basis)

    @property
    def is_algebra(self) -> bool:
        return bool(self.flags.get(IS_ALGEBRA))

    @property
    def is_star_closed(self) -> bool:
        return bool(self.flags.get(IS_STAR_CLOSED))

    @property
    def y_selfadjoint(self) -> bool:
        return bool(self.flags.get(Y_SELFADJOINT))

    def require(self, *names: str) -> None:
        """Raises: SiteFlagError 缺少任一所需标志"""
        missing = tuple(n for n in names if not self.flags.get(n))
        if missing:
            raise SiteFlagError(missing)

    def identity_coords(self) -> np.ndarray:
        return self.coords(np.eye(self.d))

    def coords(self, b: np.ndarray) -> np.ndarray:
        """B 元素 -> 基坐标（最小二乘）"""
        sol, *_ = np.linalg.lstsq(_vecs(self.basis), np.asarray(b, dtype=complex).ravel(), rcond=None)
        return sol

    def in_b(self, b: np.ndarray) -> bool:
        return _in_span(_vecs(self.basis), b)

    def in_mn_b(self, big: np.ndarray) -> bool:
        """nd×nd 矩阵的每个块是否属于 B"""
        big = np.asarray(big)
        d = self.d
        if big.ndim != 2 or big.shape[0] != big.shape[1] or big.shape[0] % d:
            return False
        n = big.shape[0] // d
        cols = _vecs(self.basis)
        return all(_in_span(cols, big[i * d:(i + 1) * d, j * d:(j + 1) * d]) for i in range(n) for j in range(n))

    def adjoint(self) -> "Site":
        """(B*, Y*)，其预解集为 ρ(Y; B)*"""
        return Site.create([b.conj().T for b in self.basis], self.y.conj().T)

    def algebra_dimension(self) -> int:
        """由 B 与 Y 生成的代数的维数"""
        span = _orth(_vecs(list(self.basis) + [self.y]))
        while True:
            mats = [span[:, k].reshape(self.d, self.d) for k in range(span.shape[1])]
            products = [a @ b for a in mats for b in mats]
            grown = _orth(np.concatenate([span, _vecs(products)], axis=1))
            if grown.shape[1] == span.shape[1]:
                return int(span.shape[1])
            span = grown

    def y_block(self, n: int) -> np.ndarray:
        """Y ⊗ I_n"""
        return np.kron(np.eye(n), self.y)

    def to_json(self) -> Dict[str, Any]:
        return {
            DIM: self.d,
            BASIS: [encode_matrix(b) for b in self.basis],
            Y: encode_matrix(self.y),
            FLAGS: dict(self.flags),
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "Site":
        """Raises: SiteValidationError, ValueError（矩阵格式）"""
        site = cls.create(
            [decode_matrix(b) for b in payload[BASIS]],
            decode_matrix(payload[Y]),
            payload.get(FLAGS),
        )
        if site.d != payload.get(DIM, site.d):
            raise SiteValidationError(f"Declared d={payload[DIM]} but Y is {site.d}x{site.d}")
        return site

    def __repr__(self) -> str:
        return f"Site(d={self.d}, dim_B={self.dim_b}, flags={dict(self.flags)})"


def _in_span(cols: np.ndarray, m: np.ndarray) -> bool:
    v = np.asarray(m, dtype=complex).ravel()
    sol, *_ = np.linalg.lstsq(cols, v, rcond=None)
    return bool(np.linalg.norm(cols @ sol - v) <= SPAN_TOL * max(1.0, np.linalg.norm(v)))


@dataclass(frozen=True)
class ResolventPoint:
    """M_n(B) 中的点

    Attributes:
        n: 尺寸
        coeffs: (n, n, dim_B) 基坐标
        matrix: nd×nd 实现矩阵
    """
    n: int
    coeffs: np.ndarray = field(compare=False)
    matrix: np.ndarray = field(compare=False)

    @classmethod
    def from_coeffs(cls, site: Site, coeffs: np.ndarray) -> "ResolventPoint":
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim != 3 or coeffs.shape[0] != coeffs.shape[1] or coeffs.shape[2] != site.dim_b:
            raise SizeMismatchError(("n", "n", site.dim_b), coeffs.shape, "point coordinates")
        n = coeffs.shape[0]
        stack = np.stack(site.basis)
        blocks = np.einsum("ijk,kab->iajb", coeffs, stack)
        return cls(n=n, coeffs=coeffs, matrix=blocks.reshape(n * site.d, n * site.d))

    @classmethod
    def from_blocks(cls, site: Site, big: np.ndarray) -> "ResolventPoint":
        """nd×nd 矩阵 -> 点（每块须属于 B）

        Raises:
            SiteValidationError: 某块不属于 B
        """
        big = np.asarray(big, dtype=complex)
        if not site.in_mn_b(big):
            raise SiteValidationError("Matrix blocks are not all in B")
        d = site.d
        n = big.shape[0] // d
        coeffs = np.zeros((n, n, site.dim_b), dtype=complex)
        for i in range(n):
            for j in range(n):
                coeffs[i, j] = site.coords(big[i * d:(i + 1) * d, j * d:(j + 1) * d])
        return cls(n=n, coeffs=coeffs, matrix=big)

    @classmethod
    def scalar(cls, site: Site, n: int, z: complex) -> "ResolventPoint":
        """z·I_n ⊗ 1"""
        coeffs = np.einsum("ij,k->ijk", z * np.eye(n), site.identity_coords())
        return cls.from_coeffs(site, coeffs)

    @classmethod
    def random(cls, site: Site, n: int, rng: np.random.Generator, scale: float = 1.0) -> "ResolventPoint":
        coeffs = scale * (rng.normal(size=(n, n, site.dim_b)) + 1j * rng.normal(size=(n, n, site.dim_b))) / np.sqrt(2)
        return cls.from_coeffs(site, coeffs)

    @property
    def d(self) -> int:
        return self.matrix.shape[0] // self.n

    def direct_sum(self, other: "ResolventPoint") -> "ResolventPoint":
        """b' ⊕ b''"""
        m, n = self.n, other.n
        coeffs = np.zeros((m + n, m + n, self.coeffs.shape[2]), dtype=complex)
        coeffs[:m, :m] = self.coeffs
        coeffs[m:, m:] = other.coeffs
        return ResolventPoint(m + n, coeffs, linalg.block_diag(self.matrix, other.matrix))

    def conjugate(self, s: np.ndarray) -> "ResolventPoint":
        """(S⊗1) b (S⊗1)⁻¹"""
        s = np.asarray(s, dtype=complex)
        s_inv = np.linalg.inv(s)
        coeffs = np.einsum("ij,jlk,lm->imk", s, self.coeffs, s_inv)
        d = self.d
        matrix = np.kron(s, np.eye(d)) @ self.matrix @ np.kron(s_inv, np.eye(d))
        return ResolventPoint(self.n, coeffs, matrix)

    def upper_triangular(self, site: Site, beta: np.ndarray, other: "ResolventPoint") -> "ResolventPoint":
        """[[b', β], [0, b'']]，β 为 (m, n, dim_B) 坐标"""
        m, n = self.n, other.n
        beta = np.asarray(beta, dtype=complex)
        if beta.shape != (m, n, site.dim_b):
            raise SizeMismatchError((m, n, site.dim_b), beta.shape, "corner coordinates")
        coeffs = np.zeros((m + n, m + n, site.dim_b), dtype=complex)
        coeffs[:m, :m] = self.coeffs
        coeffs[:m, m:] = beta
        coeffs[m:, m:] = other.coeffs
        return ResolventPoint.from_coeffs(site, coeffs)

    def perturb(self, h: np.ndarray, eps: float) -> "ResolventPoint":
        return ResolventPoint(self.n, self.coeffs, self.matrix + eps * np.asarray(h, dtype=complex))


def _as_matrix(site: Site, pt: PointLike) -> Tuple[int, np.ndarray]:
    mat = pt.matrix if isinstance(pt, ResolventPoint) else np.asarray(pt, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % site.d:
        raise SizeMismatchError(f"square multiple of d={site.d}", mat.shape, "resolvent point")
    return mat.shape[0] // site.d, mat


def shifted(site: Site, pt: PointLike) -> np.ndarray:
    """Y⊗I_n − b"""
    n, mat = _as_matrix(site, pt)
    return site.y_block(n) - mat


def membership(site: Site, pt: PointLike, kappa_max: float = KAPPA_MAX) -> Tuple[bool, float]:
    """b ∈ ρ_n(Y; B) 判定

    Returns:
        (是否属于, Y⊗I_n − b 的条件数)
    """
    cond = float(np.linalg.cond(shifted(site, pt)))
    ok = bool(np.isfinite(cond) and cond <= kappa_max)
    log.debug("membership: n=%d cond=%.3e ok=%s", shifted(site, pt).shape[0] // site.d, cond, ok)
    return ok, cond


def resolve(site: Site, pt: PointLike, kappa_max: float = KAPPA_MAX) -> np.ndarray:
    """R_n(Y; B)(b) = (Y⊗I_n − b)⁻¹

    Raises:
        NotInResolventSetError: 条件数超过上限
    """
    n, _ = _as_matrix(site, pt)
    ok, cond = membership(site, pt, kappa_max)
    if not ok:
        raise NotInResolventSetError(n, cond, kappa_max)
    if cond > kappa_max / 1e2:
        log.warning("resolve near boundary: cond=%.3e (limit %.1e)", cond, kappa_max)
    return np.linalg.inv(shifted(site, pt))


def random_member(
    site: Site,
    n: int,
    rng: np.random.Generator,
    cond_max: float = SAMPLE_COND_MAX,
    tries: int = 50,
) -> ResolventPoint:
    """条件数 ≤ cond_max 的随机预解集点

    Raises:
        NotInResolventSetError: 多次尝试仍未找到
    """
    cond = np.inf
    for _ in range(tries):
        pt = ResolventPoint.random(site, n, rng)
        ok, cond = membership(site, pt, cond_max)
        if ok:
            return pt
    raise NotInResolventSetError(n, cond, cond_max)


def random_site(rng: np.random.Generator, d: int, kind: Optional[str] = None) -> Site:
    """随机站点

    kind: scalar | diagonal | full | subspace | hermitian（默认随机选择）
    hermitian: B 为对角代数、Y 自伴（满足对偶正性所需标志）。
    """
    kinds = ("scalar", "diagonal", "full", "subspace", "hermitian")
    kind = kind or kinds[int(rng.integers(0, len(kinds)))]
    if kind == "hermitian":
        return Site.diagonal(random_hermitian(rng, d))
    y = random_matrix(rng, d, d)
    if kind == "scalar":
        return Site.scalar(y)
    if kind == "diagonal":
        return Site.diagonal(y)
    if kind == "full":
        return Site.full(y)
    if kind == "subspace":
        extra = [random_matrix(rng, d, d) for _ in range(int(rng.integers(1, max(2, d))))]
        return Site.create([np.eye(d)] + extra, y)
    raise ValueError(f"Unknown site kind: {kind}. Available: {list(kinds)}")


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b, 2) / max(1.0, np.linalg.norm(a, 2), np.linalg.norm(b, 2)))


def _spectral_scalar(site: Site, rng: np.random.Generator, n: int) -> ResolventPoint:
    """λ·1，λ ∈ σ(Y)，不属于预解集"""
    eig = np.linalg.eigvals(site.y)
    return ResolventPoint.scalar(site, n, complex(eig[int(rng.integers(0, eig.size))]))


def check_resolvent_laws(config: SamplerConfig, site: Optional[Site] = None) -> List[LawReport]:
    """预解集套件：残差、直和、共轭、上三角、开性、Taylor 步、有限性

    site 为 None 时每个样本抽取一个随机站点（d ≤ 4）。
    """
    rng = config.rng("resolvent")
    tol = config.numeric
    names = (
        "resolve_residual", "direct_sum_membership", "direct_sum_resolve", "conjugation_membership",
        "conjugation_resolve", "triangular_membership", "openness", "taylor_step", "finiteness",
    )
    tracks: Dict[str, DefectTracker] = {name: DefectTracker(name, tol) for name in names}
    tracks["taylor_step"] = DefectTracker("taylor_step", 1.0)
    max_size = min(config.max_size, 3)

    for _ in range(config.matricial_samples):
        s = site or random_site(rng, int(rng.integers(1, 5)))
        m = int(rng.integers(1, max_size + 1))
        n = int(rng.integers(1, max_size + 1))
        b1 = _spectral_scalar(s, rng, m) if rng.random() < 0.2 else random_member(s, m, rng)
        b2 = random_member(s, n, rng)
        w = lambda: {"site": s.to_json(), "b1": b1.matrix, "b2": b2.matrix}

        in1, k1 = membership(s, b1)
        in2, k2 = membership(s, b2)
        total = b1.direct_sum(b2)
        in_sum, k_sum = membership(s, total)
        tracks["direct_sum_membership"].add(float(in_sum != (in1 and in2)), w)

        S = random_gl(rng, m + n)
        conj = total.conjugate(S)
        in_conj, _ = membership(s, conj)
        tracks["conjugation_membership"].add(float(in_conj != in_sum), w)

        beta = rng.normal(size=(m, n, s.dim_b)) + 1j * rng.normal(size=(m, n, s.dim_b))
        tri = b1.upper_triangular(s, beta, b2)
        in_tri, _ = membership(s, tri)
        if in1 and in2:
            tracks["triangular_membership"].add(float(not in_tri), w)
        if in_tri:
            tracks["finiteness"].add(float(not (in1 and in2)), w)
        else:
            tracks["finiteness"].add(0.0)

        if not in2:
            continue
        r2 = resolve(s, b2)
        tracks["resolve_residual"].add(
            np.linalg.norm(shifted(s, b2) @ r2 - np.eye(r2.shape[0]), 2) / k2, w
        )
        h = ResolventPoint.random(s, n, rng).matrix
        h = h / np.linalg.norm(h, 2)
        radius = 0.5 / np.linalg.norm(r2, 2)
        tracks["openness"].add(float(not membership(s, b2.perturb(h, radius))[0]), w)

        eps = 1e-4 / max(1.0, np.linalg.norm(r2, 2))
        exact = resolve(s, b2.perturb(h, eps))
        err = np.linalg.norm(exact - r2 - eps * r2 @ h @ r2, 2)
        bound = 10 * eps ** 2 * np.linalg.norm(r2, 2) ** 3 * max(1.0, np.linalg.norm(h, 2)) ** 2
        tracks["taylor_step"].add(err / bound, lambda: {**w(), "eps": eps, "error": err, "bound": bound})

        if in1:
            r_sum = resolve(s, total)
            tracks["direct_sum_resolve"].add(
                _rel(r_sum, linalg.block_diag(resolve(s, b1), r2)) / k_sum, w
            )
            d = s.d
            lifted = np.kron(S, np.eye(d))
            expected = lifted @ r_sum @ np.linalg.inv(lifted)
            tracks["conjugation_resolve"].add(
                _rel(resolve(s, conj), expected) / (k_sum * np.linalg.cond(S) ** 2),
                lambda: {**w(), "S": S},
            )

    reports = [tracks[name].report() for name in names]
    log.info("resolvent: %d laws, %d failed", len(reports), sum(not r.passed for r in reports))
    return reports
