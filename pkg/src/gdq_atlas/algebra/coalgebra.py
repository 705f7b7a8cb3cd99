"""
coalgebra.py - 自由差商 ∂_i 作为导子-余乘法，迭代余积，ψ_k 嵌入与 GDQ 定律检查

∂_i X_j = δ_ij 1⊗1，∂_i B = 0；在单词 b_0 X_{j_1} b_1 … X_{j_m} b_m 上
对每个 j_k = i 的位置输出 (b_0 … b_{k-1}) ⊗ (b_k … b_m)。

使用示例:
    from gdq_atlas.algebra.coalgebra import partial_dq, iterate_dq, psi_embed, check_gdq_laws

    partial_dq(0, x0 * b * x0)          # 1⊗bX_0 + X_0b⊗1
    iterate_dq(2, 0, x0 * x0 * x0)      # 1⊗1⊗X + 1⊗X⊗1 + X⊗1⊗1
    psi_embed([b0, b1], 0)              # b0 X_0 b1
    reports = check_gdq_laws(SamplerConfig(seed=1))
"""

import logging
from typing import Callable, Dict, List, Sequence

import numpy as np

from ..contracts.errors import DegreeError
from ..laws.report import DefectTracker, LawReport
from ..laws.sampling import SamplerConfig, random_b, random_matrix, random_poly, split_degrees
from .ncpoly import NCPoly, PolyContext, Scalar, evaluate, unit, variable
from .tensor import TensorPoly, tensor

log = logging.getLogger(__name__)


def partial_dq(i: int, p: NCPoly) -> TensorPoly:
    """偏自由差商 ∂_i p（2 阶张量）

    Raises:
        VariableIndexError: i 越界
    """
    return TensorPoly.from_poly(p).apply_dq(i, leg=0)


def combo_dq(weights: Sequence[Scalar], p: NCPoly) -> TensorPoly:
    """Σ_i λ_i ∂_i p"""
    return TensorPoly.from_poly(p).apply_combo(list(weights), leg=0)


def iterate_dq(k: int, i: int, p: NCPoly) -> TensorPoly:
    """∂^{(k)} = (∂_i ⊗ id_{k-1}) ∘ ∂^{(k-1)}，始终作用在最左腿上（k+1 阶）"""
    if k < 1:
        raise ValueError(f"iterate_dq needs k >= 1, got {k}")
    out = partial_dq(i, p)
    for _ in range(k - 1):
        out = out.apply_dq(i, leg=0)
    return out


def psi_embed(factors: Sequence[NCPoly], i: int) -> NCPoly:
    """ψ_k(n_0 ⊗ … ⊗ n_k) = n_0 X_i n_1 … X_i n_k

    Raises:
        DegreeError: 某个因子含有变量（不属于 Ker ∂ = B）
    """
    if not factors:
        raise ValueError("psi_embed needs at least one factor")
    for pos, f in enumerate(factors):
        if not f.is_scalar():
            raise DegreeError(pos, f.degree())
    x = variable(factors[0].ctx, i)
    out = factors[0]
    for f in factors[1:]:
        out = out * x * f
    return out


def leibniz_rhs(dq: Callable[[NCPoly], TensorPoly], p: NCPoly, r: NCPoly) -> TensorPoly:
    """∂(p)·(1⊗r) + (p⊗1)·∂(r)"""
    return dq(p).mul_leg(1, right=r) + dq(r).mul_leg(0, left=p)


def _weight_row(rng: np.random.Generator, n: int) -> List[complex]:
    return [complex(int(a), int(b)) for a, b in rng.integers(-2, 3, size=(n, 2))]


def check_gdq_laws(config: SamplerConfig) -> List[LawReport]:
    """代数层与 GDQ 定律检查

    每个样本抽取高斯整数系数的随机多项式；参与乘积的因子按次数预算
    split_degrees 分配，使组合表达式总次数 ≤ max_degree。

    Returns:
        每条定律一个 LawReport（见 mappings.SUITE_LAWS["gdq"]）
    """
    ctx = config.context()
    rng = config.rng("gdq")
    tol = config.exact
    D = config.max_degree
    T = config.max_terms
    one = unit(ctx)

    names = (
        "mul_associativity", "mul_unit", "star_involution", "grade_derivation",
        "coassociativity", "leibniz", "mixed_compatibility", "grade_coderivation",
        "star_coproduct", "star_grade", "combo_gdq", "combo_compatibility",
    )
    tracks: Dict[str, DefectTracker] = {name: DefectTracker(name, tol) for name in names}
    hom = DefectTracker("evaluate_homomorphism", config.numeric)

    def poly(degree: int) -> NCPoly:
        return random_poly(ctx, rng, degree, T)

    for _ in range(config.samples):
        d1, d2, d3 = split_degrees(rng, D, 3)
        p, r, s = poly(d1), poly(d2), poly(d3)
        w = lambda: {"p": p.to_json(), "r": r.to_json(), "s": s.to_json()}
        pr = p * r

        tracks["mul_associativity"].add(((pr) * s - p * (r * s)).norm(), w)
        tracks["mul_unit"].add((one * p - p).norm() + (p * one - p).norm(), w)

        a, b = rng.integers(-2, 3, size=2)
        c = complex(int(a), int(b))
        tracks["star_involution"].add(
            (p.star().star() - p).norm()
            + (pr.star() - r.star() * p.star()).norm()
            + (p.scale(c).star() - p.star().scale(c.conjugate())).norm(),
            w,
        )
        tracks["grade_derivation"].add(
            ((pr.grade() - pr) - ((p.grade() - p) * r + p * (r.grade() - r))).norm(), w
        )

        q = p + r
        for i in range(ctx.n):
            dqi = lambda f, i=i: partial_dq(i, f)
            dq = dqi(q)
            tracks["coassociativity"].add((dq.apply_dq(i, 0) - dq.apply_dq(i, 1)).norm(), w)
            tracks["leibniz"].add((dqi(pr) - leibniz_rhs(dqi, p, r)).norm(), w)
            tracks["grade_coderivation"].add(
                (dqi(q.grade()) - (dq.grade_leg(0) + dq.grade_leg(1))).norm(), w
            )
            tracks["star_coproduct"].add((dqi(q.star()) - dq.star().flip()).norm(), w)
            for j in range(ctx.n):
                lhs = partial_dq(j, q).apply_dq(i, leg=0)
                rhs = dq.apply_dq(j, leg=1)
                tracks["mixed_compatibility"].add((lhs - rhs).norm(), w)
        tracks["star_grade"].add((q.star().grade() - q.grade().star()).norm(), w)

        lam = _weight_row(rng, ctx.n)
        mu = _weight_row(rng, ctx.n)
        dlam = lambda f: combo_dq(lam, f)
        dl = dlam(q)
        tracks["combo_gdq"].add(
            (dl.apply_combo(lam, 0) - dl.apply_combo(lam, 1)).norm()
            + (dlam(pr) - leibniz_rhs(dlam, p, r)).norm(),
            lambda: {**w(), "weights": lam},
        )
        tracks["combo_compatibility"].add(
            (combo_dq(mu, q).apply_combo(lam, 0) - dl.apply_combo(mu, 1)).norm(),
            lambda: {**w(), "weights": [lam, mu]},
        )

        size = ctx.q * int(rng.integers(1, 3))
        point = [random_matrix(rng, size, size) for _ in range(ctx.n)]
        ep, er = evaluate(p, point), evaluate(r, point)
        scale = max(1.0, np.linalg.norm(ep, 2) * np.linalg.norm(er, 2))
        hom.add(np.linalg.norm(evaluate(pr, point) - ep @ er, 2) / scale, w)

    reports = [tracks[name].report() for name in names[:4]]
    reports.append(hom.report())
    reports.extend(tracks[name].report() for name in names[4:])
    reports.extend(check_psi_recovery(config, ctx, rng))
    log.info("gdq: %d laws, %d failed", len(reports), sum(not r.passed for r in reports))
    return reports


def check_psi_recovery(config: SamplerConfig, ctx: PolyContext, rng: np.random.Generator) -> List[LawReport]:
    """∂^{(k)}∘ψ_k = id 与 ∂^{(k)}∘ψ_l = 0 (l < k ≤ psi_max)"""
    recovery = DefectTracker("psi_recovery", config.exact)
    annihilation = DefectTracker("psi_annihilation", config.exact)
    rounds = max(1, config.samples // 10)
    for _ in range(rounds):
        i = int(rng.integers(0, ctx.n))
        for k in range(1, config.psi_max + 1):
            t = [random_b(ctx, rng) for _ in range(k + 1)]
            got = iterate_dq(k, i, psi_embed(t, i))
            recovery.add((got - tensor(*t)).norm(), lambda: {"k": k, "i": i, "factors": [f.to_json() for f in t]})
            for l in range(k):
                s = t[: l + 1]
                annihilation.add(
                    iterate_dq(k, i, psi_embed(s, i)).norm(),
                    lambda: {"k": k, "l": l, "i": i, "factors": [f.to_json() for f in s]},
                )
    return [recovery.report(), annihilation.report()]
