"""
tensor.py - B⟨X⟩^{⊗k} 中的元素

键为 k 条腿各自的字母序列组成的元组，值为各腿系数张量按腿顺序拼接的稠密张量。
对某一条腿施加 ∂_i 时系数张量不变，只是把该腿的字母序列在 X_i 处一分为二：
左半 e_{r_0 s_0} X … e_{r_k s_k}，右半 e_{r_{k+1} s_{k+1}} … 。

使用示例:
    from gdq_atlas.algebra.tensor import TensorPoly, tensor

    t = tensor(p, r)                 # p ⊗ r
    t.apply_dq(0, leg=0)             # (∂_0 ⊗ id) t
    t.mul_leg(1, right=s)            # p ⊗ rs
    t.star().flip()                  # σ₁₂(t*)
"""

import itertools
from functools import reduce
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..contracts.conventions import encode_complex
from ..contracts.errors import SizeMismatchError
from .ncpoly import (
    BasisWord, Letters, NCPoly, PolyContext, Scalar,
    _accumulate, _canonical, check_same_context,
)

TensorKey = Tuple[Letters, ...]


def leg_bounds(key: TensorKey) -> List[Tuple[int, int]]:
    """每条腿在拼接张量中的轴区间 [start, stop)"""
    bounds = []
    start = 0
    for letters in key:
        stop = start + 2 * (len(letters) + 1)
        bounds.append((start, stop))
        start = stop
    return bounds


class TensorPoly:
    """k 阶张量 Σ x_1 ⊗ … ⊗ x_k（不可变）

    Attributes:
        ctx: 共享上下文
        order: 张量阶 k
    """
    __slots__ = ("ctx", "order", "_comp")

    def __init__(self, ctx: PolyContext, order: int, components: Optional[Mapping[TensorKey, np.ndarray]] = None):
        if order < 1:
            raise ValueError(f"TensorPoly order must be >= 1, got {order}")
        comp: Dict[TensorKey, np.ndarray] = {}
        for key, arr in (components or {}).items():
            key = tuple(tuple(int(i) for i in leg) for leg in key)
            if len(key) != order:
                raise SizeMismatchError(order, len(key), "tensor legs")
            for leg in key:
                for i in leg:
                    ctx.check_var(i)
            shape = tuple(s for leg in key for s in ctx.unit_shape(len(leg)))
            arr = np.asarray(arr, dtype=complex)
            if arr.shape != shape:
                raise SizeMismatchError(shape, arr.shape, f"coefficients of {key}")
            arr = _canonical(arr)
            if arr is not None:
                comp[key] = arr
        self.ctx = ctx
        self.order = order
        self._comp = comp

    @classmethod
    def from_poly(cls, p: NCPoly) -> "TensorPoly":
        return cls(p.ctx, 1, {(w,): a for w, a in p.components.items()})

    @classmethod
    def zero(cls, ctx: PolyContext, order: int) -> "TensorPoly":
        return cls(ctx, order)

    @property
    def components(self) -> Mapping[TensorKey, np.ndarray]:
        return MappingProxyType(self._comp)

    def keys(self) -> List[TensorKey]:
        return sorted(self._comp, key=lambda k: (sum(len(w) for w in k), k))

    def is_zero(self) -> bool:
        return not self._comp

    def norm(self) -> float:
        """系数模之和（缺陷范数）"""
        return float(sum(np.abs(a).sum() for a in self._comp.values()))

    def total_degree(self) -> int:
        return max((sum(len(w) for w in k) for k in self._comp), default=0)

    # ---------- 线性结构 ----------

    def _check(self, other: "TensorPoly") -> None:
        check_same_context(self, other)
        if self.order != other.order:
            raise SizeMismatchError(self.order, other.order, "tensor order")

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        if not isinstance(other, TensorPoly):
            return NotImplemented
        self._check(other)
        out = dict(self._comp)
        for k, a in other._comp.items():
            _accumulate(out, k, a)
        return TensorPoly(self.ctx, self.order, out)

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self + other.scale(-1)

    def __neg__(self) -> "TensorPoly":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "TensorPoly":
        return TensorPoly(self.ctx, self.order, {k: c * a for k, a in self._comp.items()})

    def __mul__(self, c):
        if isinstance(c, (int, float, complex, np.number)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorPoly) or self.ctx != other.ctx or self.order != other.order:
            return False
        if self._comp.keys() != other._comp.keys():
            return False
        return all(np.array_equal(a, other._comp[k]) for k, a in self._comp.items())

    __hash__ = None

    def __repr__(self) -> str:
        return f"TensorPoly(order={self.order}, keys={self.keys()})"

    # ---------- 差商 ----------

    def apply_combo(self, weights: Sequence[Scalar], leg: int = 0) -> "TensorPoly":
        """在第 leg 条腿上施加 Σ_i λ_i ∂_i，阶数加一"""
        if len(weights) != self.ctx.n:
            raise SizeMismatchError(self.ctx.n, len(weights), "weights")
        self._check_leg(leg)
        out: Dict[TensorKey, np.ndarray] = {}
        for key, arr in self._comp.items():
            word = key[leg]
            for k, letter in enumerate(word):
                w = weights[letter]
                if w == 0:
                    continue
                new_key = key[:leg] + (word[:k], word[k + 1:]) + key[leg + 1:]
                _accumulate(out, new_key, arr if w == 1 else w * arr)
        return TensorPoly(self.ctx, self.order + 1, out)

    def apply_dq(self, i: int, leg: int = 0) -> "TensorPoly":
        """在第 leg 条腿上施加 ∂_i，阶数加一"""
        self.ctx.check_var(i)
        weights = [0] * self.ctx.n
        weights[i] = 1
        return self.apply_combo(weights, leg)

    # ---------- 腿上乘法 ----------

    def _check_leg(self, leg: int) -> None:
        if not 0 <= leg < self.order:
            raise IndexError(f"Leg {leg} out of range for order {self.order}")

    def mul_leg(
        self,
        leg: int,
        left: Optional[NCPoly] = None,
        right: Optional[NCPoly] = None,
        max_degree: Optional[int] = None,
    ) -> "TensorPoly":
        """第 leg 条腿左乘 left、右乘 right: x ↦ left·x·right"""
        self._check_leg(leg)
        out = self
        if right is not None:
            out = out._mul_right(leg, right, max_degree)
        if left is not None:
            out = out._mul_left(leg, left, max_degree)
        return out

    def _mul_right(self, leg: int, r: NCPoly, max_degree: Optional[int]) -> "TensorPoly":
        check_same_context(self, r)
        out: Dict[TensorKey, np.ndarray] = {}
        for key, arr in self._comp.items():
            stop = leg_bounds(key)[leg][1]
            for lr, b in r.components.items():
                if max_degree is not None and sum(len(w) for w in key) + len(lr) > max_degree:
                    continue
                c = np.tensordot(arr, b, axes=([stop - 1], [0]))
                nb = b.ndim - 1
                base = arr.ndim - 1
                c = np.moveaxis(c, list(range(base, base + nb)), list(range(stop - 1, stop - 1 + nb)))
                new_key = key[:leg] + (key[leg] + lr,) + key[leg + 1:]
                _accumulate(out, new_key, c)
        return TensorPoly(self.ctx, self.order, out)

    def _mul_left(self, leg: int, l: NCPoly, max_degree: Optional[int]) -> "TensorPoly":
        check_same_context(self, l)
        out: Dict[TensorKey, np.ndarray] = {}
        for key, arr in self._comp.items():
            start = leg_bounds(key)[leg][0]
            for ll, a in l.components.items():
                if max_degree is not None and sum(len(w) for w in key) + len(ll) > max_degree:
                    continue
                c = np.tensordot(a, arr, axes=([a.ndim - 1], [start]))
                na = a.ndim - 1
                c = np.moveaxis(c, list(range(na)), list(range(start, start + na)))
                new_key = key[:leg] + (ll + key[leg],) + key[leg + 1:]
                _accumulate(out, new_key, c)
        return TensorPoly(self.ctx, self.order, out)

    # ---------- 对合 / 翻转 / 分级 ----------

    def star(self) -> "TensorPoly":
        """逐腿对合 (x_1 ⊗ … ⊗ x_k)* = x_1* ⊗ … ⊗ x_k*"""
        out = {}
        for key, arr in self._comp.items():
            perm = [ax for start, stop in leg_bounds(key) for ax in reversed(range(start, stop))]
            out[tuple(tuple(reversed(w)) for w in key)] = np.conj(arr.transpose(perm))
        return TensorPoly(self.ctx, self.order, out)

    def permute_legs(self, perm: Sequence[int]) -> "TensorPoly":
        """第 t 条新腿取自旧腿 perm[t]"""
        if sorted(perm) != list(range(self.order)):
            raise ValueError(f"Not a permutation of {self.order} legs: {perm}")
        out = {}
        for key, arr in self._comp.items():
            bounds = leg_bounds(key)
            axes = [ax for p in perm for ax in range(*bounds[p])]
            out[tuple(key[p] for p in perm)] = arr.transpose(axes)
        return TensorPoly(self.ctx, self.order, out)

    def flip(self) -> "TensorPoly":
        """σ₁₂：交换前两条腿"""
        return self.permute_legs([1, 0] + list(range(2, self.order)))

    def grade_leg(self, leg: int) -> "TensorPoly":
        """在第 leg 条腿上施加 L = id + deg"""
        self._check_leg(leg)
        return TensorPoly(self.ctx, self.order, {k: (1 + len(k[leg])) * a for k, a in self._comp.items()})

    def truncate(self, max_degree: int) -> "TensorPoly":
        """丢弃总 X-次数 > max_degree 的项"""
        return TensorPoly(
            self.ctx, self.order,
            {k: a for k, a in self._comp.items() if sum(len(w) for w in k) <= max_degree},
        )

    # ---------- 序列化 ----------

    def terms(self) -> Iterator[Tuple[Tuple[BasisWord, ...], complex]]:
        for key in self.keys():
            arr = self._comp[key]
            bounds = leg_bounds(key)
            for idx in zip(*np.nonzero(arr)):
                words = []
                for letters, (start, _) in zip(key, bounds):
                    units = tuple(
                        (int(idx[start + 2 * u]), int(idx[start + 2 * u + 1])) for u in range(len(letters) + 1)
                    )
                    words.append(BasisWord(units, letters))
                yield tuple(words), complex(arr[idx])

    def to_json(self) -> Dict:
        return {
            "order": self.order,
            "terms": [
                {"words": [w.sequence() for w in words], "coeff": encode_complex(c)}
                for words, c in self.terms()
            ],
        }


def tensor(*factors: Union[NCPoly, TensorPoly], max_degree: Optional[int] = None) -> TensorPoly:
    """外积 x_1 ⊗ x_2 ⊗ …；max_degree 给定时只保留总次数不超过它的项"""
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    parts = [f if isinstance(f, TensorPoly) else TensorPoly.from_poly(f) for f in factors]
    ctx = parts[0].ctx
    for part in parts[1:]:
        check_same_context(parts[0], part)
    out: Dict[TensorKey, np.ndarray] = {}
    for combo in itertools.product(*(list(p.components.items()) for p in parts)):
        key = tuple(leg for k, _ in combo for leg in k)
        if max_degree is not None and sum(len(w) for w in key) > max_degree:
            continue
        arr = reduce(np.multiply.outer, (a for _, a in combo))
        _accumulate(out, key, arr)
    return TensorPoly(ctx, sum(p.order for p in parts), out)
