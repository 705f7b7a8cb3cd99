"""
ncpoly.py - 矩阵系数非交换多项式 B⟨X_0, …, X_{n-1}⟩，B = M_q(ℂ)

规范形式：按"变量字母序列"分组，每组存一个稠密系数张量。
字母序列 (i_1, …, i_m) 对应的张量形状为 (q, q) 重复 m+1 次，
轴顺序 (r_0, s_0, r_1, s_1, …, r_m, s_m)，元素 c 表示
    c · e_{r_0 s_0} X_{i_1} e_{r_1 s_1} … X_{i_m} e_{r_m s_m}
矩阵单位基使 BasisWord 成为真正的线性基，乘法即 δ-拼接。

使用示例:
    from gdq_atlas.algebra.ncpoly import PolyContext, variable, matrix_unit, unit

    ctx = PolyContext(q=2, n=2)
    x0, x1 = variable(ctx, 0), variable(ctx, 1)
    p = matrix_unit(ctx, 0, 0) * x0 * matrix_unit(ctx, 0, 1) * x1
    p.star()           # X_1 e_10 X_0 e_00
    p.grade()          # 3·p
    p.evaluate([a, b]) # 2m×2m 矩阵

约定:
    - 变量与矩阵单位下标均从 0 开始
    - 系数为复双精度，|c| < COEFF_EPS 的系数在构造时丢弃
    - 变量自伴：X_i* = X_i，e_rs* = e_sr
    - 分级 L = id + deg
"""

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..contracts.conventions import COEFF_EPS, encode_complex, decode_complex
from ..contracts.errors import ContextMismatchError, SizeMismatchError, VariableIndexError

log = logging.getLogger(__name__)

Letters = Tuple[int, ...]
Scalar = Union[int, float, complex, np.number]


@dataclass(frozen=True)
class PolyContext:
    """多项式上下文

    Attributes:
        q: 标量代数 M_q 的尺寸
        n: 变量个数
    """
    q: int
    n: int

    def __post_init__(self):
        if self.q < 1 or self.n < 1:
            raise ValueError(f"PolyContext needs q >= 1 and n >= 1, got q={self.q}, n={self.n}")

    def check_var(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise VariableIndexError(i, self.n)
        return i

    def unit_shape(self, degree: int) -> Tuple[int, ...]:
        """degree 个字母的单词对应的系数张量形状"""
        return (self.q,) * (2 * (degree + 1))


@dataclass(frozen=True)
class BasisWord:
    """基单词 e_{r_0 s_0} X_{i_1} e_{r_1 s_1} … X_{i_m} e_{r_m s_m}

    Attributes:
        units: 矩阵单位下标对 ((r_0, s_0), …, (r_m, s_m))
        letters: 变量下标 (i_1, …, i_m)
    """
    units: Tuple[Tuple[int, int], ...]
    letters: Letters

    def __post_init__(self):
        if len(self.units) != len(self.letters) + 1:
            raise ValueError(
                f"BasisWord needs len(units) = len(letters) + 1, got {len(self.units)} and {len(self.letters)}"
            )

    @property
    def degree(self) -> int:
        return len(self.letters)

    def index(self) -> Tuple[int, ...]:
        """系数张量中的下标 (r_0, s_0, …, r_m, s_m)"""
        return tuple(k for pair in self.units for k in pair)

    def sequence(self) -> List:
        """交替序列 [[r_0, s_0], i_1, [r_1, s_1], …]，用于 JSON"""
        out: List = [list(self.units[0])]
        for letter, pair in zip(self.letters, self.units[1:]):
            out.append(letter)
            out.append(list(pair))
        return out

    @classmethod
    def from_sequence(cls, seq: Sequence) -> "BasisWord":
        """由交替序列解析

        Raises:
            ValueError: 序列不是以矩阵单位开头和结尾的交替序列
        """
        if len(seq) % 2 != 1:
            raise ValueError(f"Word sequence must alternate unit/letter/unit, got length {len(seq)}")
        units = []
        letters = []
        for pos, item in enumerate(seq):
            if pos % 2 == 0:
                if not isinstance(item, (list, tuple)) or len(item) != 2:
                    raise ValueError(f"Expected matrix-unit pair at position {pos}, got {item!r}")
                units.append((int(item[0]), int(item[1])))
            else:
                letters.append(int(item))
        return cls(tuple(units), tuple(letters))


def _canonical(arr: np.ndarray) -> Optional[np.ndarray]:
    arr = np.where(np.abs(arr) < COEFF_EPS, 0, arr).astype(complex)
    if not arr.any():
        return None
    arr.setflags(write=False)
    return arr


def _accumulate(out: Dict, key, arr: np.ndarray) -> None:
    if key in out:
        out[key] = out[key] + arr
    else:
        out[key] = arr


def check_same_context(a, b) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatchError((a.ctx.q, a.ctx.n), (b.ctx.q, b.ctx.n))


class NCPoly:
    """B⟨X⟩ 中的元素（不可变）

    Attributes:
        ctx: 上下文 (q, n)
    """
    __slots__ = ("ctx", "_comp")

    def __init__(self, ctx: PolyContext, components: Optional[Mapping[Letters, np.ndarray]] = None):
        comp: Dict[Letters, np.ndarray] = {}
        for letters, arr in (components or {}).items():
            letters = tuple(int(i) for i in letters)
            for i in letters:
                ctx.check_var(i)
            arr = np.asarray(arr, dtype=complex)
            shape = ctx.unit_shape(len(letters))
            if arr.shape != shape:
                raise SizeMismatchError(shape, arr.shape, f"coefficients of word {letters}")
            arr = _canonical(arr)
            if arr is not None:
                comp[letters] = arr
        self.ctx = ctx
        self._comp = comp

    # ---------- 视图 ----------

    @property
    def components(self) -> Mapping[Letters, np.ndarray]:
        """字母序列 -> 只读系数张量"""
        return MappingProxyType(self._comp)

    def words(self) -> List[Letters]:
        return sorted(self._comp, key=lambda w: (len(w), w))

    def terms(self) -> Iterator[Tuple[BasisWord, complex]]:
        """按确定顺序遍历 (BasisWord, 系数)"""
        for letters in self.words():
            arr = self._comp[letters]
            for idx in zip(*np.nonzero(arr)):
                units = tuple((int(idx[2 * k]), int(idx[2 * k + 1])) for k in range(len(letters) + 1))
                yield BasisWord(units, letters), complex(arr[idx])

    def degree(self) -> int:
        """最高 X-次数（零多项式为 0）"""
        return max((len(w) for w in self._comp), default=0)

    def is_zero(self) -> bool:
        return not self._comp

    def is_scalar(self) -> bool:
        """是否属于 B（X-次数为 0）"""
        return all(len(w) == 0 for w in self._comp)

    def coefficient(self, word: BasisWord) -> complex:
        arr = self._comp.get(tuple(word.letters))
        return 0j if arr is None else complex(arr[word.index()])

    def homogeneous_part(self, degree: int) -> "NCPoly":
        return NCPoly(self.ctx, {w: a for w, a in self._comp.items() if len(w) == degree})

    def truncate(self, max_degree: int) -> "NCPoly":
        return NCPoly(self.ctx, {w: a for w, a in self._comp.items() if len(w) <= max_degree})

    def norm(self) -> float:
        """系数模之和（缺陷范数）"""
        return float(sum(np.abs(a).sum() for a in self._comp.values()))

    def b_part(self) -> np.ndarray:
        """0 次部分（q×q 矩阵）"""
        arr = self._comp.get(())
        return np.zeros((self.ctx.q, self.ctx.q), dtype=complex) if arr is None else np.array(arr)

    # ---------- 运算 ----------

    def _combine(self, other: "NCPoly", sign: float) -> "NCPoly":
        check_same_context(self, other)
        out = dict(self._comp)
        for w, a in other._comp.items():
            _accumulate(out, w, sign * a)
        return NCPoly(self.ctx, out)

    def __add__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._combine(other, 1.0)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._combine(other, -1.0)

    def __neg__(self) -> "NCPoly":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "NCPoly":
        return NCPoly(self.ctx, {w: c * a for w, a in self._comp.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return mul(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly) or self.ctx != other.ctx:
            return False
        if self._comp.keys() != other._comp.keys():
            return False
        return all(np.array_equal(a, other._comp[w]) for w, a in self._comp.items())

    __hash__ = None

    def __repr__(self) -> str:
        return f"NCPoly(q={self.ctx.q}, n={self.ctx.n}, words={self.words()})"

    def star(self) -> "NCPoly":
        return star(self)

    def grade(self) -> "NCPoly":
        return grade(self)

    def evaluate(self, point: Sequence[np.ndarray]) -> np.ndarray:
        return evaluate(self, point)

    # ---------- 序列化 ----------

    def to_json(self) -> Dict:
        return {"terms": [{"word": w.sequence(), "coeff": encode_complex(c)} for w, c in self.terms()]}

    @classmethod
    def from_json(cls, ctx: PolyContext, payload: Mapping) -> "NCPoly":
        return from_terms(
            ctx,
            ((BasisWord.from_sequence(t["word"]), decode_complex(t["coeff"])) for t in payload["terms"]),
        )


# ---------- 构造 ----------

def zero(ctx: PolyContext) -> NCPoly:
    return NCPoly(ctx)


def from_matrix(ctx: PolyContext, b: np.ndarray) -> NCPoly:
    """B 中元素（q×q 矩阵）"""
    b = np.asarray(b, dtype=complex)
    if b.shape != (ctx.q, ctx.q):
        raise SizeMismatchError((ctx.q, ctx.q), b.shape, "B element")
    return NCPoly(ctx, {(): b})


def unit(ctx: PolyContext) -> NCPoly:
    """单位元 1 = Σ_r e_rr"""
    return from_matrix(ctx, np.eye(ctx.q))


def scalar(ctx: PolyContext, c: Scalar) -> NCPoly:
    return from_matrix(ctx, c * np.eye(ctx.q))


def matrix_unit(ctx: PolyContext, r: int, s: int) -> NCPoly:
    e = np.zeros((ctx.q, ctx.q), dtype=complex)
    e[r, s] = 1.0
    return from_matrix(ctx, e)


def variable(ctx: PolyContext, i: int) -> NCPoly:
    """X_i = Σ_{r,s} e_rr X_i e_ss"""
    ctx.check_var(i)
    eye = np.eye(ctx.q)
    return NCPoly(ctx, {(i,): np.einsum("ab,cd->abcd", eye, eye)})


def monomial(ctx: PolyContext, word: BasisWord, coeff: Scalar = 1.0) -> NCPoly:
    return from_terms(ctx, [(word, coeff)])


def from_terms(ctx: PolyContext, pairs: Iterable[Tuple[BasisWord, Scalar]]) -> NCPoly:
    """由 (BasisWord, 系数) 对构造，重复的基单词系数相加"""
    out: Dict[Letters, np.ndarray] = {}
    for word, c in pairs:
        letters = tuple(word.letters)
        if letters not in out:
            out[letters] = np.zeros(ctx.unit_shape(len(letters)), dtype=complex)
        for r, s in word.units:
            if not (0 <= r < ctx.q and 0 <= s < ctx.q):
                raise SizeMismatchError(f"indices < {ctx.q}", (r, s), "matrix unit")
        out[letters][word.index()] += c
    return NCPoly(ctx, out)


# ---------- 运算 ----------

def mul(p: NCPoly, r: NCPoly, max_degree: Optional[int] = None) -> NCPoly:
    """乘积 p·r（相邻矩阵单位按 e_rs e_tu = δ_st e_ru 收缩）

    Args:
        p: 左因子
        r: 右因子
        max_degree: 可选截断，丢弃 X-次数更高的项

    Raises:
        ContextMismatchError: 上下文不同
    """
    check_same_context(p, r)
    out: Dict[Letters, np.ndarray] = {}
    for lp, a in p._comp.items():
        for lr, b in r._comp.items():
            if max_degree is not None and len(lp) + len(lr) > max_degree:
                continue
            _accumulate(out, lp + lr, np.tensordot(a, b, axes=([a.ndim - 1], [0])))
    return NCPoly(p.ctx, out)


def star(p: NCPoly) -> NCPoly:
    """对合: (c e_{r0 s0} X … X e_{rm sm})* = conj(c) e_{sm rm} X … X e_{s0 r0}"""
    return NCPoly(p.ctx, {tuple(reversed(w)): np.conj(a.T) for w, a in p._comp.items()})


def grade(p: NCPoly) -> NCPoly:
    """L = id + deg：m 次齐次项乘以 1 + m"""
    return NCPoly(p.ctx, {w: (1 + len(w)) * a for w, a in p._comp.items()})


def unit_images(q: int, m: int) -> np.ndarray:
    """e_rs ↦ I_m ⊗ e_rs，返回形状 (q, q, mq, mq)"""
    out = np.zeros((q, q, m * q, m * q), dtype=complex)
    eye = np.eye(m)
    for r in range(q):
        for s in range(q):
            e = np.zeros((q, q))
            e[r, s] = 1.0
            out[r, s] = np.kron(eye, e)
    return out


def evaluate(p: NCPoly, point: Sequence[np.ndarray]) -> np.ndarray:
    """在矩阵点处求值：X_i ↦ point[i]，e_rs ↦ I_m ⊗ e_rs

    Args:
        p: 多项式
        point: n 个 mq×mq 复矩阵，表示 M_m(B) 中的元素

    Returns:
        mq×mq 复矩阵

    Raises:
        SizeMismatchError: 点的个数/尺寸不一致，或尺寸不能被 q 整除
    """
    ctx = p.ctx
    point = [np.asarray(x, dtype=complex) for x in point]
    if len(point) != ctx.n:
        raise SizeMismatchError(ctx.n, len(point), "point arity")
    size = point[0].shape[0]
    for x in point:
        if x.shape != (size, size):
            raise SizeMismatchError((size, size), x.shape, "point matrix")
    if size % ctx.q:
        raise SizeMismatchError(f"multiple of q={ctx.q}", size, "point size")
    units = unit_images(ctx.q, size // ctx.q)
    out = np.zeros((size, size), dtype=complex)
    for letters, arr in p._comp.items():
        acc = np.einsum("rs...,rsij->...ij", arr, units)
        for k in letters:
            acc = acc @ point[k]
            acc = np.einsum("rs...ij,rsjk->...ik", acc, units)
        out += acc
    return out
