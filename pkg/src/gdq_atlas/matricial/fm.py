"""
fm.py - 全矩阵集合与全矩阵函数

全矩阵集合 Ω = (Ω_n)_{n≥1}，Ω_n ⊂ M_n(G)，要求:
    直和: Ω_{m+n} ∩ (M_m ⊕ M_n) = Ω_m ⊕ Ω_n
    相似: (S⊗1) Ω_n (S⊗1)⁻¹ = Ω_n，S ∈ GL(n)
全矩阵函数 f = (f_n)，f_n: Ω_n → M_n(H)，要求:
    直和: f(g' ⊕ g'') = f(g') ⊕ f(g'')
    相似: f((S⊗1) g (S⊗1)⁻¹) = (S⊗1) f(g) (S⊗1)⁻¹

点统一存为复矩阵：M_n(G) 中的元素为 (n·block)×(n·block) 矩阵，
G = ℂ 时 block = 1，G = M_q 时 block = q，G = B ⊂ M_d 时 block = d。

集合类型:
    - SpectrumSet:   Ω_n = {T : σ(T) ⊂ Ω_1}，Ω_1 为区域（圆盘/半平面/圆盘补/并/全平面）
    - ResolventSet:  ρ_n(Y; B)
    - Intersection:  有限交

函数类型:
    - FuncCalc:      标量函数演算（多项式或有理规则）
    - PolyEval:      单变量 NCPoly 在 M_n(M_q) 上求值
    - ResolventFunc: R_n(Y; B)
    - Sum / Product / Scaled / Star: 逐点组合（fm_combine）

使用示例:
    from gdq_atlas.matricial.fm import Disk, FuncCalc, fm_eval, fm_combine, norm_K

    f = FuncCalc.polynomial([0, 0, 1], Disk(0, 4))   # z²
    fm_eval(f, 2, np.array([[1, 1], [0, 3]]))        # [[1, 4], [0, 9]]
    g = fm_combine("add", f, fm_combine("scale", f, scalar=-1))   # 0
    norm_K(f, [(1, np.array([[0.5]]))], eps=0.1)     # 0.25
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..contracts.conventions import (
    KAPPA_MAX, SPECTRAL_TOL, VALUE_SPACE_B, VALUE_SPACE_E, VALUE_SPACE_SCALAR, decode_complex, encode_complex,
)
from ..contracts.errors import DomainViolationError, SingularRuleError, SizeMismatchError, ValueSpaceError
from ..contracts.fields import CENTER, KIND, NORMAL, OFFSET, PARTS, RADIUS
from ..algebra.ncpoly import NCPoly, evaluate, star as poly_star
from ..laws.report import DefectTracker, LawReport
from ..laws.sampling import SamplerConfig, random_gl, random_matrix
from .resolvent import ResolventPoint, Site, membership, random_member, resolve

log = logging.getLogger(__name__)


# ---------- 区域 Ω_1 ⊂ ℂ ----------

class Region(ABC):
    """ℂ 中的开区域"""

    @abstractmethod
    def distance(self, z: complex) -> float:
        """带符号的到边界距离（内部为正）"""

    @abstractmethod
    def adjoint(self) -> "Region":
        """共轭区域 {z̄ : z ∈ Ω_1}"""

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> complex:
        """区域内部的随机点"""

    @abstractmethod
    def to_json(self) -> Dict[str, Any]:
        ...

    def contains(self, z: complex, margin: float = SPECTRAL_TOL) -> bool:
        return self.distance(z) > margin


@dataclass(frozen=True)
class Disk(Region):
    center: complex
    radius: float

    def distance(self, z: complex) -> float:
        return float(self.radius - abs(z - self.center))

    def adjoint(self) -> "Disk":
        return Disk(complex(self.center).conjugate(), self.radius)

    def sample(self, rng: np.random.Generator) -> complex:
        r = 0.8 * self.radius * np.sqrt(rng.random())
        return complex(self.center + r * np.exp(2j * np.pi * rng.random()))

    def to_json(self) -> Dict[str, Any]:
        return {KIND: "disk", CENTER: encode_complex(self.center), RADIUS: self.radius}


@dataclass(frozen=True)
class HalfPlane(Region):
    """{z : Re(conj(normal)·z) < offset}"""
    normal: complex
    offset: float

    def distance(self, z: complex) -> float:
        n = complex(self.normal)
        return float((self.offset - (n.conjugate() * z).real) / abs(n))

    def adjoint(self) -> "HalfPlane":
        return HalfPlane(complex(self.normal).conjugate(), self.offset)

    def sample(self, rng: np.random.Generator) -> complex:
        n = complex(self.normal)
        unit = n / abs(n)
        depth = 0.1 + 2 * rng.random()
        return complex(unit * (self.offset / abs(n) - depth) + 1j * unit * rng.uniform(-2, 2))

    def to_json(self) -> Dict[str, Any]:
        return {KIND: "half_plane", NORMAL: encode_complex(self.normal), OFFSET: self.offset}


@dataclass(frozen=True)
class DiskComplement(Region):
    center: complex
    radius: float

    def distance(self, z: complex) -> float:
        return float(abs(z - self.center) - self.radius)

    def adjoint(self) -> "DiskComplement":
        return DiskComplement(complex(self.center).conjugate(), self.radius)

    def sample(self, rng: np.random.Generator) -> complex:
        r = self.radius * (1.2 + rng.random())
        return complex(self.center + r * np.exp(2j * np.pi * rng.random()))

    def to_json(self) -> Dict[str, Any]:
        return {KIND: "disk_complement", CENTER: encode_complex(self.center), RADIUS: self.radius}


@dataclass(frozen=True)
class Union(Region):
    parts: Tuple[Region, ...]

    def distance(self, z: complex) -> float:
        return max(p.distance(z) for p in self.parts)

    def adjoint(self) -> "Union":
        return Union(tuple(p.adjoint() for p in self.parts))

    def sample(self, rng: np.random.Generator) -> complex:
        return self.parts[int(rng.integers(0, len(self.parts)))].sample(rng)

    def to_json(self) -> Dict[str, Any]:
        return {KIND: "union", PARTS: [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class Plane(Region):

    def distance(self, z: complex) -> float:
        return float("inf")

    def adjoint(self) -> "Plane":
        return self

    def sample(self, rng: np.random.Generator) -> complex:
        return complex(rng.normal(), rng.normal())

    def to_json(self) -> Dict[str, Any]:
        return {KIND: "plane"}


def region_from_json(payload: Mapping[str, Any]) -> Region:
    """区域声明 -> Region

    Raises:
        ValueError: 未知区域类型
    """
    kind = payload[KIND]
    if kind == "disk":
        return Disk(decode_complex(payload.get(CENTER, 0)), float(payload[RADIUS]))
    if kind == "half_plane":
        return HalfPlane(decode_complex(payload[NORMAL]), float(payload[OFFSET]))
    if kind == "disk_complement":
        return DiskComplement(decode_complex(payload.get(CENTER, 0)), float(payload[RADIUS]))
    if kind == "union":
        return Union(tuple(region_from_json(p) for p in payload[PARTS]))
    if kind == "plane":
        return Plane()
    raise ValueError(f"Unknown region kind: {kind}")


# ---------- 全矩阵集合 ----------

class FMSet(ABC):
    """全矩阵集合

    Attributes:
        block: G 的块尺寸
        scalars: G 的标签
    """
    block: int = 1
    scalars: str = VALUE_SPACE_SCALAR

    def size_of(self, point: np.ndarray) -> int:
        """Raises: SizeMismatchError 点不是 block 整数倍的方阵"""
        point = np.asarray(point)
        if point.ndim != 2 or point.shape[0] != point.shape[1] or point.shape[0] % self.block:
            raise SizeMismatchError(f"square multiple of {self.block}", point.shape, "matricial point")
        return point.shape[0] // self.block

    @abstractmethod
    def contains(self, point: np.ndarray) -> bool:
        ...

    @abstractmethod
    def margin(self, point: np.ndarray) -> float:
        """保证 point + ε·(M_n(G))_1 ⊂ Ω_n 的 ε 下界（非成员为 0）"""

    @abstractmethod
    def adjoint(self) -> "FMSet":
        """Ω* = {g* : g ∈ Ω}"""

    @abstractmethod
    def is_self_adjoint(self) -> bool:
        ...

    @abstractmethod
    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Ω_n 中的随机点"""

    @abstractmethod
    def random_point(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """M_n(G) 中的随机点（不必属于 Ω_n）"""

    @abstractmethod
    def random_corner(self, m: int, n: int, rng: np.random.Generator) -> np.ndarray:
        """M_{m,n}(G) 中的随机角块"""

    def unit_corner(self, m: int, n: int, j: int, k: int) -> np.ndarray:
        """γ_{m,n}(e_jk) ⊗ 1"""
        e = np.zeros((m, n), dtype=complex)
        e[j, k] = 1
        return np.kron(e, np.eye(self.block))

    def lift(self, s: np.ndarray) -> np.ndarray:
        """S ⊗ 1"""
        return np.kron(s, np.eye(self.block))


@dataclass(frozen=True)
class SpectrumSet(FMSet):
    """Ω_n = {T ∈ M_n(M_q) : σ(T) ⊂ Ω_1}"""
    region: Region
    block: int = 1

    @property
    def scalars(self) -> str:
        return VALUE_SPACE_SCALAR if self.block == 1 else VALUE_SPACE_B

    def contains(self, point: np.ndarray) -> bool:
        self.size_of(point)
        eig = linalg.eigvals(point)
        return all(self.region.contains(z) for z in eig)

    def margin(self, point: np.ndarray) -> float:
        """Bauer-Fike: min 边界距离 / cond(V)"""
        if not self.contains(point):
            return 0.0
        w, v = linalg.eig(point)
        dist = min(self.region.distance(z) for z in w)
        return float(dist / np.linalg.cond(v))

    def adjoint(self) -> "SpectrumSet":
        return SpectrumSet(self.region.adjoint(), self.block)

    def is_self_adjoint(self) -> bool:
        return self.region.adjoint() == self.region

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        size = n * self.block
        v = random_gl(rng, size, low=0.5, high=2.0)
        lam = np.array([self.region.sample(rng) for _ in range(size)])
        return v @ np.diag(lam) @ np.linalg.inv(v)

    def random_point(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return random_matrix(rng, n * self.block, n * self.block, 2.0)

    def random_corner(self, m: int, n: int, rng: np.random.Generator) -> np.ndarray:
        return random_matrix(rng, m * self.block, n * self.block)


class ResolventSet(FMSet):
    """ρ(Y; B) = (ρ_n(Y; B))_n"""
    scalars = VALUE_SPACE_B

    def __init__(self, site: Site, kappa_max: float = KAPPA_MAX):
        self.site = site
        self.kappa_max = kappa_max
        self.block = site.d

    def contains(self, point: np.ndarray) -> bool:
        self.size_of(point)
        return self.site.in_mn_b(point) and membership(self.site, point, self.kappa_max)[0]

    def margin(self, point: np.ndarray) -> float:
        """1 / ‖R‖：任何范数更小的扰动都保持可逆"""
        if not self.contains(point):
            return 0.0
        return float(1.0 / np.linalg.norm(resolve(self.site, point, self.kappa_max), 2))

    def adjoint(self) -> "ResolventSet":
        return ResolventSet(self.site.adjoint(), self.kappa_max)

    def is_self_adjoint(self) -> bool:
        return self.site.is_star_closed and self.site.y_selfadjoint

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return random_member(self.site, n, rng).matrix

    def random_point(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return ResolventPoint.random(self.site, n, rng).matrix

    def random_corner(self, m: int, n: int, rng: np.random.Generator) -> np.ndarray:
        k = self.site.dim_b
        coeffs = (rng.normal(size=(m, n, k)) + 1j * rng.normal(size=(m, n, k))) / np.sqrt(2)
        blocks = np.einsum("ijk,kab->iajb", coeffs, np.stack(self.site.basis))
        return blocks.reshape(m * self.block, n * self.block)

    def __repr__(self) -> str:
        return f"ResolventSet({self.site!r})"


class Intersection(FMSet):
    """Ω ∩ Ω' ∩ …（块尺寸须一致）"""

    def __init__(self, parts: Sequence[FMSet], tries: int = 200):
        parts = tuple(parts)
        if not parts:
            raise ValueError("Intersection needs at least one part")
        blocks = {p.block for p in parts}
        if len(blocks) != 1:
            raise SizeMismatchError(parts[0].block, sorted(blocks), "intersection block sizes")
        self.parts = parts
        self.block = parts[0].block
        self.scalars = parts[0].scalars
        self.tries = tries

    def contains(self, point: np.ndarray) -> bool:
        return all(p.contains(point) for p in self.parts)

    def margin(self, point: np.ndarray) -> float:
        return min(p.margin(point) for p in self.parts)

    def adjoint(self) -> "Intersection":
        return Intersection([p.adjoint() for p in self.parts], self.tries)

    def is_self_adjoint(self) -> bool:
        return all(p.is_self_adjoint() for p in self.parts)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Raises: DomainViolationError 拒绝采样失败"""
        for _ in range(self.tries):
            point = self.parts[0].sample(n, rng)
            if self.contains(point):
                return point
        raise DomainViolationError(n, f"no sample found in {self.tries} tries")

    def random_point(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.parts[0].random_point(n, rng)

    def random_corner(self, m: int, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.parts[0].random_corner(m, n, rng)

    def __repr__(self) -> str:
        return f"Intersection({list(self.parts)!r})"


def intersect(a: FMSet, b: FMSet) -> FMSet:
    if a is b or (isinstance(a, SpectrumSet) and a == b):
        return a
    return Intersection([a, b])


def fm_membership(omega: FMSet, n: int, point: np.ndarray) -> bool:
    """point ∈ Ω_n

    Raises:
        SizeMismatchError: point 尺寸不是 n·block
    """
    if omega.size_of(point) != n:
        raise SizeMismatchError(n, omega.size_of(point), "matricial point size")
    return omega.contains(point)


# ---------- 全矩阵函数 ----------

class FMFunc(ABC):
    """全矩阵函数

    Attributes:
        domain: 定义域 Ω
        value_space: 值空间标签（C / B / E）
        block_out: 值空间的块尺寸
    """
    domain: FMSet
    value_space: str = VALUE_SPACE_SCALAR
    block_out: int = 1

    @abstractmethod
    def _eval(self, point: np.ndarray) -> np.ndarray:
        ...

    def evaluate(self, point: np.ndarray) -> np.ndarray:
        """Raises: DomainViolationError"""
        n = self.domain.size_of(point)
        if not self.domain.contains(point):
            raise DomainViolationError(n, f"point not in {self.domain!r}")
        return self._eval(np.asarray(point, dtype=complex))

    def lift_out(self, s: np.ndarray) -> np.ndarray:
        """值空间上的 S ⊗ 1"""
        return np.kron(s, np.eye(self.block_out))


class FuncCalc(FMFunc):
    """标量函数演算 f(T)

    rule="polynomial": f(z) = Σ c_k z^k
    rule="rational":   f(z) = P(z) / Q(z)，矩阵上为 Q(T)⁻¹ P(T)
    """
    value_space = VALUE_SPACE_SCALAR
    block_out = 1

    def __init__(
        self,
        rule: str,
        numerator: Sequence[complex],
        denominator: Sequence[complex] = (1,),
        region: Optional[Region] = None,
        label: str = "",
    ):
        if rule not in ("polynomial", "rational"):
            raise ValueError(f"Unknown rule: {rule}")
        self.rule = rule
        self.numerator = tuple(complex(c) for c in numerator)
        self.denominator = tuple(complex(c) for c in denominator)
        self.region = region or Plane()
        self.domain = SpectrumSet(self.region, 1)
        self.label = label

    @classmethod
    def polynomial(cls, coeffs: Sequence[complex], region: Optional[Region] = None, label: str = "") -> "FuncCalc":
        return cls("polynomial", coeffs, (1,), region, label)

    @classmethod
    def rational(
        cls,
        numerator: Sequence[complex],
        denominator: Sequence[complex],
        region: Optional[Region] = None,
        label: str = "",
    ) -> "FuncCalc":
        return cls("rational", numerator, denominator, region, label)

    @staticmethod
    def _horner(coeffs: Sequence[complex], t: np.ndarray) -> np.ndarray:
        out = np.zeros_like(t)
        ident = np.eye(t.shape[0], dtype=complex)
        for c in reversed(coeffs):
            out = out @ t + c * ident
        return out

    def _eval(self, point: np.ndarray) -> np.ndarray:
        top = self._horner(self.numerator, point)
        if self.rule == "polynomial":
            return top
        bottom = self._horner(self.denominator, point)
        cond = float(np.linalg.cond(bottom))
        if not np.isfinite(cond) or cond > KAPPA_MAX:
            raise SingularRuleError(cond)
        return np.linalg.solve(bottom, top)

    def scalar(self, z: complex) -> complex:
        top = np.polyval(self.numerator[::-1], z)
        if self.rule == "polynomial":
            return complex(top)
        return complex(top / np.polyval(self.denominator[::-1], z))

    def star_rule(self) -> "FuncCalc":
        """f* 直接由共轭系数给出"""
        return FuncCalc(
            self.rule,
            [c.conjugate() for c in self.numerator],
            [c.conjugate() for c in self.denominator],
            self.region.adjoint(),
            f"{self.label}*" if self.label else "",
        )

    def __repr__(self) -> str:
        return f"FuncCalc({self.rule}, {self.numerator}/{self.denominator}, {self.region!r})"


class PolyEval(FMFunc):
    """单变量 p ∈ B⟨X⟩ 在 M_n(M_q) 上的求值"""
    value_space = VALUE_SPACE_B

    def __init__(self, poly: NCPoly, domain: Optional[FMSet] = None, label: str = ""):
        if poly.ctx.n != 1:
            raise SizeMismatchError(1, poly.ctx.n, "poly_eval variables")
        self.poly = poly
        self.block_out = poly.ctx.q
        self.domain = domain or SpectrumSet(Plane(), poly.ctx.q)
        if self.domain.block != poly.ctx.q:
            raise SizeMismatchError(poly.ctx.q, self.domain.block, "poly_eval domain block")
        self.label = label

    def _eval(self, point: np.ndarray) -> np.ndarray:
        return evaluate(self.poly, [point])

    def __repr__(self) -> str:
        return f"PolyEval(degree={self.poly.degree()}, q={self.poly.ctx.q})"


class ResolventFunc(FMFunc):
    """b ↦ R_n(Y; B)(b)"""
    value_space = VALUE_SPACE_E

    def __init__(self, site: Site, label: str = ""):
        self.site = site
        self.domain = ResolventSet(site)
        self.block_out = site.d
        self.label = label

    def _eval(self, point: np.ndarray) -> np.ndarray:
        return resolve(self.site, point)

    def __repr__(self) -> str:
        return f"ResolventFunc({self.site!r})"


def _check_compatible(a: FMFunc, b: FMFunc) -> None:
    if a.value_space != b.value_space or a.block_out != b.block_out:
        raise ValueSpaceError(f"{a.value_space}[{a.block_out}]", f"{b.value_space}[{b.block_out}]")
    if a.domain.block != b.domain.block:
        raise SizeMismatchError(a.domain.block, b.domain.block, "domain block")


class Sum(FMFunc):
    def __init__(self, a: FMFunc, b: FMFunc):
        _check_compatible(a, b)
        self.a, self.b = a, b
        self.domain = intersect(a.domain, b.domain)
        self.value_space, self.block_out = a.value_space, a.block_out

    def _eval(self, point: np.ndarray) -> np.ndarray:
        return self.a._eval(point) + self.b._eval(point)


class Product(FMFunc):
    def __init__(self, a: FMFunc, b: FMFunc):
        _check_compatible(a, b)
        self.a, self.b = a, b
        self.domain = intersect(a.domain, b.domain)
        self.value_space, self.block_out = a.value_space, a.block_out

    def _eval(self, point: np.ndarray) -> np.ndarray:
        return self.a._eval(point) @ self.b._eval(point)


class Scaled(FMFunc):
    def __init__(self, c: complex, f: FMFunc):
        self.c, self.f = complex(c), f
        self.domain = f.domain
        self.value_space, self.block_out = f.value_space, f.block_out

    def _eval(self, point: np.ndarray) -> np.ndarray:
        return self.c * self.f._eval(point)


class Star(FMFunc):
    """f*_n(g) = (f_n(g*))*，定义域 Ω*"""

    def __init__(self, f: FMFunc):
        self.f = f
        self.domain = f.domain.adjoint()
        self.value_space, self.block_out = f.value_space, f.block_out

    def _eval(self, point: np.ndarray) -> np.ndarray:
        return self.f._eval(point.conj().T).conj().T


COMBINE_OPS = ("add", "mul", "star", "scale")


def fm_combine(op: str, *operands: FMFunc, scalar: complex = 1.0) -> FMFunc:
    """惰性组合节点

    Raises:
        ValueSpaceError: 值空间不兼容
        ValueError: 未知 op 或操作数个数不对
    """
    if op not in COMBINE_OPS:
        raise ValueError(f"Unknown combine op: {op}. Available: {list(COMBINE_OPS)}")
    arity = 2 if op in ("add", "mul") else 1
    if len(operands) != arity:
        raise ValueError(f"{op} takes {arity} operand(s), got {len(operands)}")
    if op == "add":
        return Sum(*operands)
    if op == "mul":
        return Product(*operands)
    if op == "scale":
        return Scaled(scalar, operands[0])
    f = operands[0]
    return f.f if isinstance(f, Star) else Star(f)


def fm_eval(f: FMFunc, n: int, point: np.ndarray) -> np.ndarray:
    """f_n(point) ∈ M_n(H)

    Raises:
        SizeMismatchError: 点尺寸不是 n
        DomainViolationError: 点不在定义域
        SingularRuleError: 有理规则分母奇异
    """
    if f.domain.size_of(point) != n:
        raise SizeMismatchError(n, f.domain.size_of(point), "matricial point size")
    return f.evaluate(point)


def norm_K(f: FMFunc, family: Sequence[Tuple[int, np.ndarray]], eps: float) -> float:
    """‖f‖_K = max_{g ∈ K} ‖f(g)‖，K 须满足 K_n + ε(M_n(G))_1 ⊂ Ω_n

    Raises:
        DomainViolationError: 某点不在定义域或余量不足 eps
    """
    if eps <= 0:
        raise ValueError(f"Margin eps must be positive, got {eps}")
    best = 0.0
    for n, point in family:
        margin = f.domain.margin(point)
        if margin < eps:
            raise DomainViolationError(n, f"margin {margin:.3e} < eps {eps:.3e}")
        best = max(best, float(np.linalg.norm(fm_eval(f, n, point), 2)))
    return best


# ---------- 定律检查 ----------

def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b, 2) / max(1.0, np.linalg.norm(a, 2), np.linalg.norm(b, 2)))


def blocks_of(x: np.ndarray, m: int, block: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """2×2 分块（左上为 m·block）"""
    k = m * block
    return x[:k, :k], x[:k, k:], x[k:, :k], x[k:, k:]


def upper_block(a: np.ndarray, corner: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[[a, corner], [0, b]]"""
    out = linalg.block_diag(a, b).astype(complex)
    out[: a.shape[0], a.shape[1]:] = corner
    return out


def _named(name: str, label: Optional[str]) -> str:
    return f"{name}:{label}" if label else name


def check_fm_laws(f: FMFunc, config: SamplerConfig, label: Optional[str] = None) -> List[LawReport]:
    """全矩阵套件：集合直和、集合相似、三角成员、函数直和、函数相似、角块形状、星律、谱相似不变、K-范数单调"""
    rng = config.rng(_named("fm", label))
    exact, tol = config.exact, config.loose
    omega = f.domain
    blk, bo = omega.block, f.block_out
    max_size = min(config.max_size, 3)

    names = ("set_direct_sum", "set_similarity", "fm_triangular", "fm_direct_sum", "fm_similarity", "corner_shape", "star_law")
    kinds = {"set_direct_sum": exact, "set_similarity": exact, "fm_triangular": exact}
    tracks = {n: DefectTracker(_named(n, label), kinds.get(n, tol)) for n in names}
    spectral = DefectTracker(_named("spectrum_similarity", label), tol) if isinstance(omega, SpectrumSet) else None
    monotone = DefectTracker(_named("norm_monotone", label), exact)

    for _ in range(config.matricial_samples):
        m = int(rng.integers(1, max_size + 1))
        n = int(rng.integers(1, max_size + 1))
        g1 = omega.sample(m, rng)
        g2 = omega.sample(n, rng) if rng.random() < 0.7 else omega.random_point(n, rng)
        w = lambda: {"g1": g1, "g2": g2}

        in1, in2 = omega.contains(g1), omega.contains(g2)
        total = linalg.block_diag(g1, g2)
        tracks["set_direct_sum"].add(float(omega.contains(total) != (in1 and in2)), w)

        s = random_gl(rng, m)
        moved = omega.lift(s) @ g1 @ np.linalg.inv(omega.lift(s))
        tracks["set_similarity"].add(float(omega.contains(moved) != in1), lambda: {**w(), "S": s})

        if not in2:
            g2 = omega.sample(n, rng)
        gamma = omega.random_corner(m, n, rng)
        tracks["fm_triangular"].add(float(not omega.contains(upper_block(g1, gamma, g2))), w)

        f1, f2 = f._eval(g1), f._eval(g2)
        tracks["fm_direct_sum"].add(_rel(f._eval(linalg.block_diag(g1, g2)), linalg.block_diag(f1, f2)), w)
        lifted = f.lift_out(s)
        tracks["fm_similarity"].add(
            _rel(f._eval(moved), lifted @ f1 @ np.linalg.inv(lifted)) / np.linalg.cond(s) ** 2,
            lambda: {**w(), "S": s},
        )

        corners = {}
        shape_defect = 0.0
        for lam in (0, 1, 2):
            val = f._eval(upper_block(g1, lam * gamma, g2))
            top, corner, low, bottom = blocks_of(val, m, bo)
            shape_defect += np.linalg.norm(low, 2) / max(1.0, np.linalg.norm(val, 2))
            shape_defect += _rel(top, f1) + _rel(bottom, f2)
            corners[lam] = corner
        shape_defect += np.linalg.norm(corners[0], 2) + _rel(corners[2], 2 * corners[1])
        tracks["corner_shape"].add(shape_defect, lambda: {**w(), "gamma": gamma})

        fs = fm_combine("star", f)
        g_adj = fs.domain.sample(m, rng)
        star_defect = _rel(fs._eval(g_adj), f._eval(g_adj.conj().T).conj().T)
        star_defect += _rel(fm_combine("star", fs)._eval(g1), f1)
        if isinstance(f, FuncCalc):
            star_defect += _rel(fs._eval(g_adj), f.star_rule()._eval(g_adj))
        elif isinstance(f, PolyEval):
            star_defect += _rel(fs._eval(g_adj), evaluate(poly_star(f.poly), [g_adj]))
        tracks["star_law"].add(star_defect, lambda: {**w(), "g_adjoint": g_adj})

        if spectral is not None:
            e1 = np.sort_complex(linalg.eigvals(g1))
            e2 = np.sort_complex(linalg.eigvals(moved))
            gap = max(min(abs(a - b) for b in e2) for a in e1) / max(1.0, np.abs(e1).max())
            spectral.add(gap / np.linalg.cond(s) ** 2 + float(omega.contains(moved) != in1), lambda: {**w(), "S": s})

        family = [(m, g1), (n, g2)]
        eps = min(omega.margin(g) for _, g in family)
        if eps > 0:
            extra = (m, moved)
            if omega.margin(moved) >= eps:
                small = norm_K(f, family, eps)
                large = norm_K(f, family + [extra], eps)
                monotone.add(max(0.0, small - large), w)

    reports = [tracks[n].report() for n in names]
    if spectral is not None:
        reports.append(spectral.report())
    reports.append(monotone.report())
    log.info("fm[%s]: %d laws, %d failed", label or "-", len(reports), sum(not r.passed for r in reports))
    return reports
