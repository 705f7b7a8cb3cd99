import numpy as np
import pytest

from gdq_atlas.algebra.ncpoly import PolyContext
from gdq_atlas.laws.sampling import SamplerConfig
from gdq_atlas.matricial.resolvent import Site


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def ctx():
    return PolyContext(q=2, n=2)


@pytest.fixture
def scalar_ctx():
    return PolyContext(q=1, n=1)


@pytest.fixture
def small_config():
    """单元测试用的缩小样本配置"""
    return SamplerConfig(
        seed=11,
        q=2,
        n=2,
        order=4,
        samples=30,
        max_degree=4,
        series_samples=6,
        series_size=2,
        lift_p=2,
        matricial_samples=16,
        max_size=2,
        positivity_trials=40,
        positivity_samples=4,
    )


@pytest.fixture
def hermitian_site():
    """B = 对角代数，Y 自伴"""
    y = np.array([[0.5, 0.3], [0.3, -0.4]])
    return Site.diagonal(y)


@pytest.fixture
def full_site():
    """B = M_2，Y 非自伴"""
    y = np.array([[0.2, 1.0], [-0.5, 0.1j]])
    return Site.full(y)


@pytest.fixture
def swap_site():
    """B = ℂ1，Y = [[0, 1], [1, 0]]"""
    return Site.scalar(np.array([[0.0, 1.0], [1.0, 0.0]]))
