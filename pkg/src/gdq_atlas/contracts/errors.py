"""
errors.py - 领域异常层级

所有代数/矩阵层的前置条件失败统一抛出 AtlasError 的子类。
定律检查本身不抛异常（缺陷写入 LawReport），只有输入不满足前置条件时才抛。

使用示例:
    from gdq_atlas.contracts.errors import NotInResolventSetError

    try:
        r = resolve(site, b)
    except NotInResolventSetError as e:
        print(e.size, e.cond)

异常类型:
    - AtlasError: 领域异常基类
    - ContextMismatchError: 多项式上下文(q, n)不一致
    - VariableIndexError: 变量下标越界
    - DegreeError: 要求 X-次数为 0 的因子含有变量
    - SizeMismatchError: 矩阵尺寸不一致/不可被 q 整除
    - SeriesInversionError: 级数 0 次部分奇异或条件数过大
    - SiteValidationError / SiteFlagError: 站点(B, Y)构造失败 / 缺少所需标志
    - NotInResolventSetError: 点不在预解集中
    - DomainViolationError: 点不在全矩阵集合中
    - SingularRuleError: 有理函数演算分母奇异
    - ValueSpaceError: 值空间 H 不兼容
    - NonFullyMatricialError: 块对角校验失败（求值器不是全矩阵函数）
    - NonHermitianChoiError: Choi 矩阵超出容差不厄米
"""

from typing import Optional, Tuple


class AtlasError(Exception):
    """领域异常基类"""
    pass


class ContextMismatchError(AtlasError):
    """多项式上下文不一致

    Attributes:
        left: 左操作数上下文 (q, n)
        right: 右操作数上下文 (q, n)
    """
    def __init__(self, left: Tuple[int, int], right: Tuple[int, int]):
        self.left = left
        self.right = right
        super().__init__(f"Context mismatch: (q, n)={left} vs {right}")


class VariableIndexError(AtlasError):
    """变量下标越界

    Attributes:
        index: 给定下标
        n: 变量个数
    """
    def __init__(self, index: int, n: int):
        self.index = index
        self.n = n
        super().__init__(f"Variable index {index} out of range for n={n} (0-based)")


class DegreeError(AtlasError):
    """因子 X-次数为正（要求属于 Ker ∂ 的标量部分）

    Attributes:
        position: 因子位置
        degree: 实际次数
    """
    def __init__(self, position: int, degree: int):
        self.position = position
        self.degree = degree
        super().__init__(f"Factor {position} has X-degree {degree}, expected 0")


class SizeMismatchError(AtlasError):
    """矩阵尺寸不一致

    Attributes:
        expected: 期望尺寸描述
        got: 实际尺寸描述
    """
    def __init__(self, expected, got, what: str = "matrix"):
        self.expected = expected
        self.got = got
        super().__init__(f"Size mismatch for {what}: expected {expected}, got {got}")


class SeriesInversionError(AtlasError):
    """级数 0 次部分不可逆或病态

    Attributes:
        cond: 条件数
        limit: 允许上限
    """
    def __init__(self, cond: float, limit: float):
        self.cond = cond
        self.limit = limit
        super().__init__(f"Degree-0 part not invertible: cond={cond:.3e} > {limit:.1e}")


class SiteValidationError(AtlasError):
    """站点(B, Y)构造失败"""
    pass


class SiteFlagError(AtlasError):
    """站点缺少所需标志

    Attributes:
        flags: 缺少的标志名元组
    """
    def __init__(self, flags: Tuple[str, ...]):
        self.flags = flags
        super().__init__(f"Site lacks required flags: {list(flags)}")


class NotInResolventSetError(AtlasError):
    """点不在预解集中

    Attributes:
        size: 点的矩阵尺寸 n
        cond: Y⊗I_n − b 的条件数
        limit: 条件数上限
    """
    def __init__(self, size: int, cond: float, limit: float):
        self.size = size
        self.cond = cond
        self.limit = limit
        super().__init__(
            f"Point of size {size} outside resolvent set: cond={cond:.3e} > {limit:.1e}"
        )


class DomainViolationError(AtlasError):
    """点不在全矩阵集合中

    Attributes:
        size: 点尺寸
        reason: 失败原因
    """
    def __init__(self, size: int, reason: str = ""):
        self.size = size
        self.reason = reason
        msg = f"Point of size {size} outside the domain"
        if reason:
            msg = f"{msg}: {reason}"
        super().__init__(msg)


class SingularRuleError(AtlasError):
    """有理函数演算中分母矩阵奇异

    Attributes:
        cond: 分母条件数
    """
    def __init__(self, cond: float):
        self.cond = cond
        super().__init__(f"Rational rule denominator singular: cond={cond:.3e}")


class ValueSpaceError(AtlasError):
    """值空间不兼容

    Attributes:
        expected: 期望的值空间标签
        got: 实际标签
    """
    def __init__(self, expected: str, got: str):
        self.expected = expected
        self.got = got
        super().__init__(f"Value space mismatch: expected {expected}, got {got}")


class NonFullyMatricialError(AtlasError):
    """块上三角点处求值的对角块与直接求值不符

    Attributes:
        defect: 对角块偏差
        tolerance: 容差
    """
    def __init__(self, defect: float, tolerance: float):
        self.defect = defect
        self.tolerance = tolerance
        super().__init__(
            f"Diagonal blocks disagree with direct evaluation: {defect:.3e} > {tolerance:.1e}"
        )


class NonHermitianChoiError(AtlasError):
    """Choi 矩阵不厄米（映射不保厄米性，通常意味着 f ≠ f*）

    Attributes:
        defect: 反厄米部分的最大模
        tolerance: 容差
    """
    def __init__(self, defect: float, tolerance: float, context: Optional[str] = None):
        self.defect = defect
        self.tolerance = tolerance
        msg = f"Choi matrix not Hermitian: {defect:.3e} > {tolerance:.1e}"
        if context:
            msg = f"[{context}] {msg}"
        super().__init__(msg)
