"""
duality.py - E = M_d 上的泛函与全预解变换 U

泛函 φ(a) = tr(a·W) 由权矩阵 W 表示：
    - φ*(a) = conj(φ(a*))，权为 W*
    - φ ≥ 0 ⇔ W ⪰ 0；φ 迹性 ⇔ W ∈ ℂI

全预解变换（H = ℂ，定义域 ρ(Y; B)）:
    U_n(φ)(b) = (φ⊗id)((b − Y⊗I_n)⁻¹) = −(φ⊗id)(R_n(Y; B)(b))

恒等式套件:
    - entry_product: 块点 [[b₁, e_jk⊗1], [0, b₂]] 的预解式角块 (i, l) = R₁_ij·R₂_kl
    - approx_inverse / approx_y: 预解式元素张成中逼近 b⁻¹ 与 Y 的一阶收敛
    - dual_mul: Σ_j (φ⊗ψ)(R_ij⊗R_jk) = (U(φ)U(ψ))_ik
    - pairing: (φ⊗id⊗id)(R_m(b₁)⊗_E R_n(b₂)) = −α∂U(φ)(b₁; b₂)
    - trace_flip: ∂U(φ) 翻转对称 ⇔ φ 在预解式元素交换子上为 0
    - star_intertwining / forward_positivity / converse_witness / normalization
    - u_injectivity: W ↦ U(W) 的秩 = B 与 Y 生成的代数的维数

使用示例:
    from gdq_atlas.matricial.duality import Functional, u_transform

    site = Site.scalar(np.array([[0, 1], [1, 0]]))
    u = u_transform(site, Functional.normalized_trace(2))
    u.evaluate(2.0 * np.eye(2))         # [[0.6667]]，b = 2·1 ∈ M_1(B)
"""

import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy import linalg

from ..contracts.conventions import (
    PROBE_SLOPE_TOL, RANK_RTOL, VALUE_SPACE_SCALAR, WITNESS_THRESHOLD, decode_matrix, encode_matrix,
)
from ..contracts.errors import SizeMismatchError
from ..contracts.fields import IS_STAR_CLOSED, WEIGHT, Y_SELFADJOINT
from ..laws.report import DefectTracker, LawReport
from ..laws.sampling import SamplerConfig, random_matrix, random_psd
from .fm import FMFunc, ResolventSet, fm_combine
from .fmdq import corner_image, dq_block, nabla
from .positivity import cp_check, dual_positive
from .resolvent import Site, random_member, random_site, resolve

log = logging.getLogger(__name__)

SMALL_EPS = 1e-3
SMALL_EPS_FACTOR = 1e-2
ROUNDING_FLOOR = 1e-11


@dataclass(frozen=True)
class Functional:
    """φ(a) = tr(a·W)"""
    weight: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=complex)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise SizeMismatchError("square weight", w.shape, "functional weight")
        object.__setattr__(self, "weight", w)

    @classmethod
    def normalized_trace(cls, d: int) -> "Functional":
        return cls(np.eye(d) / d)

    @classmethod
    def zero(cls, d: int) -> "Functional":
        return cls(np.zeros((d, d)))

    @property
    def d(self) -> int:
        return self.weight.shape[0]

    def apply(self, a: np.ndarray) -> complex:
        return complex(np.trace(np.asarray(a) @ self.weight))

    def apply_blocks(self, big: np.ndarray) -> np.ndarray:
        """(φ⊗id)：nd×nd -> n×n，逐块作用"""
        n = big.shape[0] // self.d
        return np.einsum("iajb,ba->ij", big.reshape(n, self.d, n, self.d), self.weight)

    def star(self) -> "Functional":
        return Functional(self.weight.conj().T)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.weight, self.weight.conj().T, atol=tol))

    def is_positive(self, tol: float = 1e-12) -> bool:
        return self.is_hermitian(tol) and float(linalg.eigvalsh(self.weight)[0]) >= -tol

    def is_tracial(self, tol: float = 1e-12) -> bool:
        c = np.trace(self.weight) / self.d
        return bool(np.allclose(self.weight, c * np.eye(self.d), atol=tol))

    def to_json(self) -> Dict[str, Any]:
        return {WEIGHT: encode_matrix(self.weight)}

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "Functional":
        return cls(decode_matrix(payload[WEIGHT]))


class UTransform(FMFunc):
    """U(φ)，定义域 ρ(Y; B)，值空间 ℂ"""
    value_space = VALUE_SPACE_SCALAR
    block_out = 1

    def __init__(self, site: Site, functional: Functional, label: str = ""):
        if functional.d != site.d:
            raise SizeMismatchError(site.d, functional.d, "functional weight")
        self.site = site
        self.functional = functional
        self.domain = ResolventSet(site)
        self.label = label

    def _eval(self, point: np.ndarray) -> np.ndarray:
        return -self.functional.apply_blocks(resolve(self.site, point))

    def __repr__(self) -> str:
        return f"UTransform({self.site!r}, label={self.label!r})"


def u_transform(site: Site, functional: Functional, label: str = "") -> UTransform:
    return UTransform(site, functional, label)


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(1.0, float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    return float(np.abs(np.asarray(a) - np.asarray(b)).max(initial=0.0) / scale)


def _kappa(site: Site, b: np.ndarray) -> float:
    n = b.shape[0] // site.d
    return float(np.linalg.cond(site.y_block(n) - b))


def _blocks4(r: np.ndarray, d: int) -> np.ndarray:
    n = r.shape[0] // d
    return r.reshape(n, d, n, d)


def _upper(b1: np.ndarray, x: np.ndarray, b2: np.ndarray) -> np.ndarray:
    out = linalg.block_diag(b1, b2).astype(complex)
    out[: b1.shape[0], b1.shape[1]:] = x
    return out


# ---------- 单项检查 ----------

def entry_product_check(site: Site, b1: np.ndarray, b2: np.ndarray, law: str = "entry_product",
                        tolerance: float = 1e-9) -> LawReport:
    """预解式元素的乘积仍是预解式元素：块点角块 (i, l) 等于 R₁_ij·R₂_kl，缺陷按 κ₁κ₂ 缩放"""
    d = site.d
    m, n = b1.shape[0] // d, b2.shape[0] // d
    r1, r2 = _blocks4(resolve(site, b1), d), _blocks4(resolve(site, b2), d)
    kappa = _kappa(site, b1) * _kappa(site, b2)
    scale = max(1.0, float(np.abs(r1).max()) * float(np.abs(r2).max())) * kappa
    track = DefectTracker(law, tolerance)
    for j in range(m):
        for k in range(n):
            e = np.zeros((m, n))
            e[j, k] = 1
            big = resolve(site, _upper(b1, np.kron(e, np.eye(d)), b2))
            corner = _blocks4(big, d)[:m, :, m:, :]
            want = np.einsum("iac,cle->iale", r1[:, :, j, :], r2[k])
            defect = float(np.abs(corner - want).max()) / scale
            track.add(defect, lambda j=j, k=k: {"b1": b1, "b2": b2, "j": j, "k": k})
    return track.report(kappa=kappa)


def _slope(steps: np.ndarray, errors: np.ndarray) -> Optional[float]:
    if np.any(errors <= 1e-13):
        return None
    return float(np.polyfit(np.log(steps), np.log(errors), 1)[0])


def approximation_probes(site: Site, rng: np.random.Generator, probes: int = 5,
                         tolerance: float = PROBE_SLOPE_TOL) -> Tuple[LawReport, LawReport]:
    """收敛探针

    approx_inverse: λ(λb − Y)⁻¹ → b⁻¹，误差 O(1/λ)（对数斜率 ≤ −1）
    approx_y: ε⁻¹(ε⁻¹(ε⁻¹ − Y)⁻¹ − ε⁻²(ε⁻² − Y)⁻¹) → Y，误差 O(ε)（对数斜率 ≥ 1），
              且 ε = 1e-3 处误差 ≤ 1e-2·max(1, ‖Y‖)³
    误差在舍入量级以下视为精确。
    """
    y, d = site.y, site.d
    ynorm = float(np.linalg.norm(y, 2))
    inv_track = DefectTracker("approx_inverse", tolerance)
    y_track = DefectTracker("approx_y", tolerance)
    eye = np.eye(d)

    for _ in range(probes):
        b = random_member(site, 1, rng).matrix
        while np.linalg.cond(b) > 1e4:
            b = b + eye
        b_inv = np.linalg.inv(b)
        lam0 = 10.0 * (1.0 + ynorm * float(np.linalg.norm(b_inv, 2)))
        lams = lam0 * 2.0 ** np.arange(5)
        errs = np.array([np.linalg.norm(lam * np.linalg.inv(lam * b - y) - b_inv, 2) for lam in lams])
        slope = _slope(lams, errs)
        inv_track.add(0.0 if slope is None else max(0.0, slope + 1.0), lambda b=b: {"b": b, "errors": errs})

    eps0 = 0.05 / (1.0 + ynorm)
    epss = eps0 * 2.0 ** -np.arange(5)

    def recover(eps: float) -> np.ndarray:
        t1, t2 = 1.0 / eps, 1.0 / eps ** 2
        return (t1 * np.linalg.inv(t1 * eye - y) - t2 * np.linalg.inv(t2 * eye - y)) / eps

    errs = np.array([np.linalg.norm(recover(e) - y, 2) for e in epss])
    slope = _slope(epss, errs)
    y_track.add(0.0 if slope is None else max(0.0, 1.0 - slope), lambda: {"eps": epss, "errors": errs})

    # ‖Y‖ ≥ 1e2 时 ε = 1e-3 尚未进入渐近区，跳过
    at_small = bound = None
    if ynorm < 1e2:
        at_small = float(np.linalg.norm(recover(SMALL_EPS) - y, 2))
        bound = SMALL_EPS_FACTOR * max(1.0, ynorm) ** 3
        ratio = at_small / bound
        y_track.add(
            0.0 if ratio <= 1.0 else 1.0 + ratio, lambda: {"eps": SMALL_EPS, "error": at_small, "bound": bound}
        )
    return inv_track.report(), y_track.report(error_small_eps=at_small, small_eps_bound=bound)


def dual_mul_check(site: Site, phi: Functional, psi: Functional, b: np.ndarray,
                   law: str = "dual_mul", tolerance: float = 1e-10) -> LawReport:
    """Σ_j (φ⊗ψ)(R_ij⊗R_jk) 与 U(φ)U(ψ) 的 (i, k) 元比较"""
    d = site.d
    r4 = _blocks4(resolve(site, b), d)
    n = r4.shape[0]
    both = np.kron(phi.weight, psi.weight)
    lhs = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for k in range(n):
            lhs[i, k] = sum(np.trace(np.kron(r4[i, :, j, :], r4[j, :, k, :]) @ both) for j in range(n))
    rhs = u_transform(site, phi)._eval(b) @ u_transform(site, psi)._eval(b)
    track = DefectTracker(law, tolerance)
    track.add(_rel(lhs, rhs), lambda: {"b": b})
    return track.report()


def pairing_lhs(site: Site, phi: Functional, b1: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """(φ⊗id⊗id)(R_m(b₁) ⊗_E R_n(b₂))：mn×mn，(i·n+k, j·n+l) 元为 φ(R₁_ij R₂_kl)"""
    d = site.d
    r1, r2 = _blocks4(resolve(site, b1), d), _blocks4(resolve(site, b2), d)
    m, n = r1.shape[0], r2.shape[0]
    prod = np.einsum("iajc,kcle->ijklae", r1, r2)
    xi = np.einsum("ijklae,ea->ikjl", prod, phi.weight)
    return xi.reshape(m * n, m * n)


def pairing_check(site: Site, phi: Functional, b1: np.ndarray, b2: np.ndarray,
                  law: str = "pairing", tolerance: float = 1e-9) -> LawReport:
    """(φ⊗id⊗id)(R_m(b₁)⊗_E R_n(b₂)) = −α∂U(φ)(b₁; b₂)，缺陷按 κ₁κ₂ 缩放"""
    lhs = pairing_lhs(site, phi, b1, b2)
    rhs = -dq_block(u_transform(site, phi), b1, b2).alpha_form()
    kappa = _kappa(site, b1) * _kappa(site, b2)
    track = DefectTracker(law, tolerance)
    track.add(_rel(lhs, rhs) / kappa, lambda: {"b1": b1, "b2": b2})
    return track.report(kappa=kappa)


def flip(xi: np.ndarray, n: int, m: int) -> np.ndarray:
    """M_n⊗M_m -> M_m⊗M_n 交换两个张量因子"""
    return xi.reshape(n, m, n, m).transpose(1, 0, 3, 2).reshape(m * n, m * n)


def trace_flip_check(site: Site, phi: Functional, rng: np.random.Generator, samples: int = 10,
                     max_size: int = 2, law: str = "trace_flip", tolerance: float = 1e-9) -> LawReport:
    """翻转对称缺陷与交换子判据独立计算，二者数值与判定须一致"""
    u = u_transform(site, phi)
    track = DefectTracker(law, tolerance)
    worst_flip = worst_comm = 0.0
    disagreements = 0
    for _ in range(samples):
        m, n = (int(x) for x in rng.integers(1, max_size + 1, size=2))
        b1 = random_member(site, m, rng).matrix
        b2 = random_member(site, n, rng).matrix
        fwd = dq_block(u, b1, b2).alpha_form()
        back = dq_block(u, b2, b1).alpha_form()
        scale = max(1.0, float(np.abs(fwd).max()))
        flip_defect = float(np.abs(fwd - flip(back, n, m)).max()) / scale

        r1, r2 = _blocks4(resolve(site, b1), site.d), _blocks4(resolve(site, b2), site.d)
        comm = 0.0
        for i in range(m):
            for j in range(m):
                for k in range(n):
                    for l in range(n):
                        u1, u2 = r1[i, :, j, :], r2[k, :, l, :]
                        comm = max(comm, abs(phi.apply(u1 @ u2 - u2 @ u1)))
        comm /= scale

        worst_flip, worst_comm = max(worst_flip, flip_defect), max(worst_comm, comm)
        verdicts_differ = (flip_defect <= tolerance) != (comm <= tolerance)
        disagreements += int(verdicts_differ)
        track.add(abs(flip_defect - comm) + float(verdicts_differ), lambda: {"b1": b1, "b2": b2})
    return track.report(
        flip_defect=worst_flip,
        commutator_defect=worst_comm,
        flip_symmetric=worst_flip <= tolerance,
        disagreements=disagreements,
    )


def u_rank(site: Site, rng: np.random.Generator, points: Optional[int] = None) -> int:
    """W ↦ (U(W) 在一组丰富样本点上的值) 的数值秩"""
    d = site.d
    points = points or 2 * d * d
    columns = []
    for t in range(points):
        n = 1 + (t % 2)
        r4 = _blocks4(resolve(site, random_member(site, n, rng).matrix), d)
        # φ_{e_ab}(R_ij) = R_ij[b, a]
        columns.append(-r4.transpose(3, 1, 0, 2).reshape(d * d, n * n))
    mat = np.concatenate(columns, axis=1)
    sv = linalg.svdvals(mat)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int((sv > RANK_RTOL * sv[0]).sum())


# ---------- 正性传递 ----------

def _resolvent_entries(site: Site, rng: np.random.Generator,
                       points: int) -> Tuple[List[np.ndarray], List[Tuple[np.ndarray, int, int]]]:
    """样本点（n = 1, 2 交替）上的全部预解式元素 R_ij 及其来源 (b, i, j)"""
    d = site.d
    entries, origins = [], []
    for t in range(points):
        n = 1 + (t % 2)
        b = random_member(site, n, rng).matrix
        r4 = _blocks4(resolve(site, b), d)
        for i in range(n):
            for j in range(n):
                entries.append(r4[i, :, j, :])
                origins.append((b, i, j))
    return entries, origins


def converse_witness(site: Site, phi: Functional, rng: np.random.Generator,
                     points: Optional[int] = None) -> Optional[Dict[str, Any]]:
    """φ = φ* 而 W 有负特征值时，构造 −U(φ) 不对偶正的反例

    ξ 取预解式元素的线性组合：先在元素张成中逼近 vv*（v 为 W 最负特征值的特征向量）；
    若 φ(ξξ*) 仍不为负，改取张成上二次型 ξ ↦ φ(ξξ*) 的最小特征方向。
    每个参与组合的元素各占一个直和块，b = ⊕ b_t，ξ = k·R(b)·h，于是
        k·∇(−U)(b, b*)(hh*)·k* = φ(ξξ*) < 0，
    即半正定输入 hh* 的像不半正定。

    Returns:
        反例（b, h = hh*, k, image, xi, value = φ(ξξ*), paired_value = k·image·k*）；
        φ 在预解式元素张成上半正定时为 None
    """
    d = site.d
    weight = (phi.weight + phi.weight.conj().T) / 2
    evals, evecs = linalg.eigh(weight)
    v = evecs[:, 0]

    entries, origins = _resolvent_entries(site, rng, points or 2 * d * d)
    cols = np.stack([e.ravel() for e in entries], axis=1)
    _, r, piv = linalg.qr(cols, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    keep = piv[: int((diag > RANK_RTOL * diag[0]).sum())]
    span = cols[:, keep]

    def normalized(c: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x = (span @ c).reshape(d, d)
        s = float(np.linalg.norm(x))
        return (c / s, x / s) if s > 0 else (c, x)

    coeffs, xi = normalized(np.linalg.lstsq(span, np.outer(v, v.conj()).ravel(), rcond=None)[0])
    construction = "eigenvector"
    if phi.apply(xi @ xi.conj().T).real >= -WITNESS_THRESHOLD:
        mats = [span[:, a].reshape(d, d) for a in range(span.shape[1])]
        form = np.array([[np.trace(x.conj().T @ weight @ z) for z in mats] for x in mats])
        _, vecs = linalg.eigh(form, span.conj().T @ span)
        coeffs, xi = normalized(vecs[:, 0])
        construction = "quadratic_form"
    value = float(phi.apply(xi @ xi.conj().T).real)
    if value >= -WITNESS_THRESHOLD:
        return None

    chosen = [origins[a] for a in keep]
    sizes = [b.shape[0] // d for b, _, _ in chosen]
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(int)
    big = linalg.block_diag(*[b for b, _, _ in chosen])
    k = np.zeros(sum(sizes), dtype=complex)
    h = np.zeros(sum(sizes), dtype=complex)
    for c, off, (_, i, j) in zip(coeffs, offsets, chosen):
        k[off + i] = c
        h[off + j] = 1.0
    hh = np.outer(h, h.conj())
    neg_u = fm_combine("scale", u_transform(site, phi), scalar=-1.0)
    image = corner_image(neg_u, big, big.conj().T, hh)
    return {
        "b": big,
        "h": hh,
        "k": k,
        "image": image,
        "xi": xi,
        "value": value,
        "paired_value": complex(k @ image @ k.conj()),
        "image_min_eigenvalue": float(linalg.eigvalsh((image + image.conj().T) / 2)[0]),
        "weight_min_eigenvalue": float(evals[0]),
        "construction": construction,
    }


def _normalization(site: Site, phi: Functional, u: UTransform) -> LawReport:
    """|N·U₁(φ)(N·1) − φ(1)| ≤ C/N，在 N₀·{1, 2, 4} 上拟合收敛阶（斜率 ≤ −1）"""
    d = site.d
    ynorm = float(np.linalg.norm(site.y, 2))
    limit = phi.apply(np.eye(d))
    bound = 2.0 * max(1.0, float(np.linalg.norm(phi.weight, "nuc"))) * (1.0 + ynorm)
    sizes = 1e3 * (1.0 + ynorm) * 2.0 ** np.arange(3)
    values = [big_n * u._eval(big_n * np.eye(d))[0, 0] for big_n in sizes]
    errs = np.array([abs(value - limit) for value in values])

    track = DefectTracker("normalization", 1.0)
    for big_n, value, err in zip(sizes, values, errs):
        track.add(err * big_n / bound, lambda big_n=big_n, value=value: {"N": big_n, "value": value})
    rate = None
    if errs.min() > ROUNDING_FLOOR * bound:
        rate = float(np.polyfit(np.log(sizes), np.log(errs), 1)[0])
        track.add(max(0.0, rate + 1.0) / PROBE_SLOPE_TOL, lambda: {"N": sizes, "errors": errs, "rate": rate})
    return track.report(limit=limit, rate=rate, errors=errs)


def positivity_transfer_check(site: Site, phi: Functional, config: SamplerConfig) -> List[LawReport]:
    """star_intertwining、forward_positivity、converse_witness、normalization

    forward_positivity 除场景 φ 外，还对 positivity_samples 个随机半正定权 W
    要求 ∇(−U(W))(b, b*) 的 Choi 矩阵半正定。
    converse_witness 找不到反例时判为失败（缺陷 inf）。

    Raises:
        SiteFlagError: B 不是 *-闭或 Y 不自伴
    """
    site.require(IS_STAR_CLOSED, Y_SELFADJOINT)
    rng = config.rng("utransform:positivity")
    tol = config.loose
    d = site.d
    u, u_star = u_transform(site, phi), u_transform(site, phi.star())

    star_track = DefectTracker("star_intertwining", tol)
    for _ in range(config.matricial_samples):
        n = int(rng.integers(1, 3))
        b = random_member(site, n, rng).matrix
        star_track.add(_rel(u_star._eval(b), u._eval(b.conj().T).conj().T), lambda b=b: {"b": b})

    forward = DefectTracker("forward_positivity", tol)
    if phi.is_positive():
        for r in dual_positive(fm_combine("scale", u, scalar=-1.0), config, label="forward"):
            forward.add(r.defect, lambda r=r: {"law": r.law, "witness": r.witness})
    lowest = np.inf
    for _ in range(config.positivity_samples):
        w = random_psd(rng, d)
        w = w / np.trace(w).real
        neg = fm_combine("scale", u_transform(site, Functional(w)), scalar=-1.0)
        b = random_member(site, int(rng.integers(1, 3)), rng).matrix
        cp = cp_check(nabla(neg, b), tol)
        lowest = min(lowest, cp.details["min_eigenvalue"])
        forward.add(
            cp.defect, lambda w=w, b=b, cp=cp: {"weight": w, "b": b, "min_eigenvalue": cp.details["min_eigenvalue"]}
        )
    forward_report = forward.report(
        vacuous=not phi.is_positive(), random_weights=config.positivity_samples, min_choi_eigenvalue=lowest
    )

    witness = DefectTracker("converse_witness", tol)
    if phi.is_positive():
        converse_report = witness.report(vacuous=True)
    elif not phi.is_hermitian():
        b = random_member(site, 1, rng).matrix
        mismatch = _rel(u._eval(b), u._eval(b.conj().T).conj().T)
        found = {"b": b, "star_defect": mismatch} if mismatch > WITNESS_THRESHOLD else None
        witness.add(0.0 if found else np.inf)
        converse_report = replace(
            witness.report(vacuous=False, witness_found=found is not None, kind="not_self_adjoint",
                           star_defect=mismatch),
            witness=found,
        )
    else:
        found = converse_witness(site, phi, rng)
        if found is None:
            log.warning("converse_witness: φ is positive on the span of resolvent entries, no witness")
            witness.add(np.inf)
            details = {"kind": "positive_on_span"}
        else:
            scale = max(1.0, abs(found["value"])) * _kappa(site, found["b"])
            not_negative = float(found["image_min_eigenvalue"] >= -WITNESS_THRESHOLD)
            witness.add(abs(found["paired_value"] - found["value"]) / scale + not_negative)
            details = {"kind": "negative_value", "value": found["value"], "construction": found["construction"]}
        converse_report = replace(
            witness.report(vacuous=False, witness_found=found is not None, **details), witness=found
        )

    return [star_track.report(), forward_report, converse_report, _normalization(site, phi, u)]


# ---------- 套件 ----------

def check_utransform_laws(
    site: Site,
    phi: Functional,
    config: SamplerConfig,
    psi: Optional[Functional] = None,
) -> List[LawReport]:
    """全预解变换套件；站点缺少 *-闭/自伴标志时跳过正性传递部分

    直和、角块乘积、配对与 dual_mul 在场景 (site, φ) 上取 matricial_samples 个样本，
    另在同样多个随机 (site, φ, ψ)（d ≤ 4）上各取一个样本。
    """
    rng = config.rng("utransform")
    tol = config.loose
    psi = psi or Functional(random_matrix(rng, site.d, site.d))
    max_size = min(config.max_size, 3)

    direct = DefectTracker("u_direct_sum", tol)
    merged: Dict[str, LawReport] = {}

    def check_pair(s: Site, f: Functional, g: Functional) -> None:
        m, n = (int(x) for x in rng.integers(1, max_size + 1, size=2))
        b1, b2 = random_member(s, m, rng).matrix, random_member(s, n, rng).matrix
        uf = u_transform(s, f)
        direct.add(_rel(uf._eval(linalg.block_diag(b1, b2)), linalg.block_diag(uf._eval(b1), uf._eval(b2))),
                   lambda: {"site": s.to_json(), "b1": b1, "b2": b2})
        for r in (entry_product_check(s, b1, b2, tolerance=tol),
                  pairing_check(s, f, b1, b2, tolerance=tol),
                  dual_mul_check(s, f, g, b1, tolerance=config.numeric)):
            merged[r.law] = merged[r.law].merge(r) if r.law in merged else r

    for _ in range(config.matricial_samples):
        check_pair(site, phi, psi)
    for _ in range(config.matricial_samples):
        d = int(rng.integers(2, 5))
        check_pair(random_site(rng, d), Functional(random_matrix(rng, d, d)), Functional(random_matrix(rng, d, d)))

    approx_inv, approx_y = approximation_probes(site, rng)
    reports = [
        direct.report(random_sites=config.matricial_samples),
        merged["entry_product"], approx_inv, approx_y, merged["dual_mul"], merged["pairing"],
        trace_flip_check(site, phi, rng, samples=max(1, config.matricial_samples // 10), tolerance=tol),
    ]

    if site.is_star_closed and site.y_selfadjoint:
        reports.extend(positivity_transfer_check(site, phi, config))
    else:
        log.warning("utransform: site lacks star_closed/y_selfadjoint, positivity transfer skipped")

    rank = u_rank(site, rng)
    expected = site.algebra_dimension()
    inj = DefectTracker("u_injectivity", config.exact)
    inj.add(abs(rank - expected), lambda: {"rank": rank, "algebra_dimension": expected})
    reports.append(inj.report(rank=rank, algebra_dimension=expected, injective=rank == site.d ** 2))

    log.info("utransform: %d laws, %d failed", len(reports), sum(not r.passed for r in reports))
    return reports
