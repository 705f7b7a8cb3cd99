"""
positivity.py - Choi 矩阵与对偶正性

对 M_n → M_n 的线性映射 Φ（以 CornerMap 给出）：
    - Choi 矩阵 C = Σ_ij e_ij ⊗ Φ(e_ij)，Φ 完全正 ⇔ C ⪰ 0
    - 正映射检查：随机半正定输入 h，要求 Φ(h) ⪰ 0

f ∈ A(Ω)（H = ℂ）对偶正 ⇔ f = f* 且 ∇f(g, g*) 对每个 g 都是正映射；
等价地 ∇f(g, g*) 完全正，或在直和点 g⁽¹⁾⊕g⁽²⁾ 上为正映射。
dual_positive 同时计算三种形式并要求判定互相一致。

使用示例:
    from gdq_atlas.matricial.positivity import ChoiMatrix, cp_check, positive_map_check

    transpose = CornerMap.from_linear_map(lambda h: h.T, 2, 2)
    ChoiMatrix.from_map(transpose).min_eigenvalue()   # -1.0
    cp_check(transpose).passed                        # False
    positive_map_check(transpose, 200, rng).passed    # True
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy import linalg

from ..contracts.conventions import CHOI_HERMITIAN_TOL, LOOSE_TOL, POSITIVITY_TRIALS, VALUE_SPACE_SCALAR
from ..contracts.errors import DomainViolationError, NonHermitianChoiError, SizeMismatchError, ValueSpaceError
from ..laws.report import DefectTracker, LawReport
from ..laws.sampling import SamplerConfig, random_matrix, random_psd
from .fm import FMFunc, fm_combine
from .fmdq import CornerMap, nabla

log = logging.getLogger(__name__)


def _require_square(phi: CornerMap) -> None:
    if not phi.is_square:
        raise SizeMismatchError((phi.m, phi.m), (phi.m, phi.n), "square corner map")
    if phi.block_out != 1:
        raise ValueSpaceError(VALUE_SPACE_SCALAR, phi.value_space)


@dataclass(frozen=True)
class ChoiMatrix:
    """C = Σ_ij e_ij ⊗ Φ(e_ij)，行 (i, a)，列 (j, b)"""
    n: int
    matrix: np.ndarray

    @classmethod
    def from_map(cls, phi: CornerMap) -> "ChoiMatrix":
        _require_square(phi)
        n = phi.n
        return cls(n, phi.images.transpose(0, 2, 1, 3).reshape(n * n, n * n))

    def hermitian_defect(self) -> float:
        scale = max(1.0, float(np.abs(self.matrix).max()))
        return float(np.abs(self.matrix - self.matrix.conj().T).max() / scale)

    def min_eigenvalue(self) -> float:
        sym = (self.matrix + self.matrix.conj().T) / 2
        return float(linalg.eigvalsh(sym)[0])


def _negativity(x: np.ndarray) -> float:
    """max(反厄米部分, 负特征值)，相对 ‖x‖"""
    scale = max(1.0, float(np.linalg.norm(x, 2)))
    skew = float(np.abs(x - x.conj().T).max()) / scale
    low = float(linalg.eigvalsh((x + x.conj().T) / 2)[0]) / scale
    return max(skew, -low, 0.0)


def positive_map_check(
    phi: CornerMap,
    trials: int = POSITIVITY_TRIALS,
    rng: Optional[np.random.Generator] = None,
    tolerance: float = LOOSE_TOL,
    law: str = "positive_map",
) -> LawReport:
    """Φ 把半正定矩阵映到半正定矩阵

    输入为迹归一化的随机半正定矩阵（秩 1 到 n），首个输入为 I/n。
    """
    _require_square(phi)
    rng = rng if rng is not None else np.random.default_rng(0)
    n = phi.n
    track = DefectTracker(law, tolerance)
    low = np.inf
    for t in range(max(1, trials)):
        if t == 0:
            h = np.eye(n, dtype=complex) / n
        else:
            h = random_psd(rng, n, rank=int(rng.integers(1, n + 1)))
            h = h / np.trace(h).real
        out = phi.apply(h)
        low = min(low, float(linalg.eigvalsh((out + out.conj().T) / 2)[0]))
        track.add(_negativity(out), lambda: {"h": h, "image": out})
    return track.report(min_eigenvalue=low)


def cp_check(phi: CornerMap, tolerance: float = LOOSE_TOL, law: str = "completely_positive") -> LawReport:
    """Choi 判据

    Raises:
        NonHermitianChoiError: Choi 矩阵不厄米（超出 CHOI_HERMITIAN_TOL）
    """
    choi = ChoiMatrix.from_map(phi)
    skew = choi.hermitian_defect()
    if skew > CHOI_HERMITIAN_TOL:
        raise NonHermitianChoiError(skew, CHOI_HERMITIAN_TOL, law)
    low = choi.min_eigenvalue()
    scale = max(1.0, float(np.abs(choi.matrix).max()))
    track = DefectTracker(law, tolerance)
    track.add(max(0.0, -low / scale), lambda: {"choi": choi.matrix})
    return track.report(min_eigenvalue=low)


def check_choi_fixtures(config: SamplerConfig) -> List[LawReport]:
    """机制自检：恒等映射完全正；转置映射为正但非完全正，Choi 最小特征值 −1"""
    rng = config.rng("dualpos:fixtures")
    tol = config.loose
    reports = []

    ident = DefectTracker("choi_identity", tol)
    trans = DefectTracker("choi_transpose", tol)
    for n in range(1, min(config.max_size, 3) + 1):
        eye_map = CornerMap.from_linear_map(lambda h: h, n, n)
        kraus = random_matrix(rng, n, n)
        kraus_map = CornerMap.from_linear_map(lambda h, a=kraus: a @ h @ a.conj().T, n, n)
        d_id = abs(ChoiMatrix.from_map(eye_map).min_eigenvalue() - (1.0 if n == 1 else 0.0))
        d_id += cp_check(kraus_map, tol).defect
        d_id += positive_map_check(eye_map, 20, rng, tol).defect
        ident.add(d_id, lambda n=n: {"n": n})

        if n > 1:
            t_map = CornerMap.from_linear_map(lambda h: h.T, n, n)
            expected = -1.0
            d_t = abs(ChoiMatrix.from_map(t_map).min_eigenvalue() - expected)
            d_t += positive_map_check(t_map, 20, rng, tol).defect
            d_t += float(cp_check(t_map, tol).passed)
            trans.add(d_t, lambda n=n: {"n": n})
    reports.append(ident.report())
    reports.append(trans.report())
    return reports


def _verdicts(phi: CornerMap, trials: int, rng: np.random.Generator, tol: float):
    pos = positive_map_check(phi, trials, rng, tol)
    try:
        cp = cp_check(phi, tol)
    except NonHermitianChoiError as e:
        log.debug("Choi not Hermitian: %s", e)
        return pos, None
    return pos, cp


def dual_positive(f: FMFunc, config: SamplerConfig, label: Optional[str] = None) -> List[LawReport]:
    """f 是否对偶正：f = f*，∇f(g, g*) 正、完全正、在直和点上正，三者判定一致

    Returns:
        [positive_map, completely_positive, dual_positive] 三条报告

    Raises:
        ValueSpaceError: H ≠ ℂ
        DomainViolationError: 定义域不自伴
    """
    name = lambda law: f"{law}:{label}" if label else law
    if f.value_space != VALUE_SPACE_SCALAR:
        raise ValueSpaceError(VALUE_SPACE_SCALAR, f.value_space)
    if not f.domain.is_self_adjoint():
        raise DomainViolationError(0, "dual positivity needs a self-adjoint domain")

    rng = config.rng(name("dualpos"))
    tol = config.loose
    trials = max(1, config.positivity_trials)
    f_star = fm_combine("star", f)

    pos_track = DefectTracker(name("positive_map"), tol)
    cp_track = DefectTracker(name("completely_positive"), tol)
    dp_track = DefectTracker(name("dual_positive"), tol)
    contradictions = 0
    non_hermitian = 0

    for _ in range(config.positivity_samples):
        n1, n2 = (int(x) for x in rng.integers(1, 3, size=2))
        g1, g2 = f.domain.sample(n1, rng), f.domain.sample(n2, rng)
        g = linalg.block_diag(g1, g2)
        w = lambda: {"g1": g1, "g2": g2}

        self_adj = float(np.abs(f._eval(g1) - f_star._eval(g1)).max()) / max(1.0, float(np.abs(f._eval(g1)).max()))

        verdicts = []
        for point in (g1, g2, g):
            pos, cp = _verdicts(nabla(f, point), trials, rng, tol)
            pos_track.add(pos.defect, lambda pos=pos: {**w(), "witness": pos.witness})
            if cp is None:
                non_hermitian += 1
                cp_track.add(np.inf, w)
                verdicts.append((pos.passed, False))
            else:
                cp_track.add(cp.defect, lambda cp=cp: {**w(), "min_eigenvalue": cp.details["min_eigenvalue"]})
                verdicts.append((pos.passed, cp.passed))

        (p1, c1), (p2, c2), (pb, cb) = verdicts
        bad = sum(1 for p, c in verdicts if c and not p)
        if cb and not (c1 and c2):
            bad += 1
        if pb and not (p1 and p2):
            bad += 1
        contradictions += bad
        all_ok = all(p and c for p, c in verdicts)
        dp_track.add(self_adj + bad + (0.0 if all_ok else 1.0), w)

    reports = [
        pos_track.report(),
        cp_track.report(non_hermitian=non_hermitian),
        dp_track.report(contradictions=contradictions),
    ]
    log.info("dualpos[%s]: %s", label or "-", "pass" if all(r.passed for r in reports) else "fail")
    return reports
