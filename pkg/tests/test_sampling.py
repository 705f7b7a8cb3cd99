import numpy as np
import pytest
from hypothesis import given, strategies as st

from gdq_atlas.algebra.ncpoly import PolyContext
from gdq_atlas.laws.sampling import (
    SamplerConfig, gaussian_integer, random_gl, random_poly, random_psd, random_unitary, split_degrees,
)


def test_named_streams_are_independent_and_repeatable():
    config = SamplerConfig(seed=3)
    a = config.rng("gdq").normal(size=4)
    np.testing.assert_array_equal(a, SamplerConfig(seed=3).rng("gdq").normal(size=4))
    assert not np.array_equal(a, config.rng("corep").normal(size=4))
    assert not np.array_equal(a, SamplerConfig(seed=4).rng("gdq").normal(size=4))


def test_tolerance_scaling():
    config = SamplerConfig(seed=1, tol_scale=10.0)
    assert config.exact == 0.0
    assert config.numeric == pytest.approx(1e-9)
    assert config.loose == pytest.approx(1e-8)
    assert config.context() == PolyContext(2, 2)


def test_from_scenario_overrides():
    scenario = {
        "seed": 9,
        "context": {"q": 1, "n": 3, "order": 4},
        "sampler": {"samples": 5, "max_size": 2},
        "tolerances": {"exact": 0.0, "numeric": 1e-8, "loose": 1e-7},
    }
    config = SamplerConfig.from_scenario(scenario, tol_scale=2.0, verify_fd=True)
    assert (config.seed, config.q, config.n, config.order) == (9, 1, 3, 4)
    assert (config.samples, config.max_size) == (5, 2)
    assert config.numeric == pytest.approx(2e-8)
    assert config.verify_fd
    assert SamplerConfig.from_scenario(scenario, seed=100).seed == 100


@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(0, 8), st.integers(1, 4))
def test_split_degrees_respects_budget(seed, total, parts):
    out = split_degrees(np.random.default_rng(seed), total, parts)
    assert len(out) == parts and sum(out) <= total and min(out) >= 0


def test_random_poly_has_integer_coefficients(rng, ctx):
    p = random_poly(ctx, rng, max_degree=3, max_terms=3)
    assert p.degree() <= 3
    for _, c in p.terms():
        assert c.real == int(c.real) and c.imag == int(c.imag)
    assert gaussian_integer(rng) != 0


def test_random_matrices(rng):
    u = random_unitary(rng, 3)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(3), atol=1e-12)
    g = random_gl(rng, 3, 0.5, 2.0)
    assert np.linalg.cond(g) <= 4.0 + 1e-9
    p = random_psd(rng, 3, rank=1)
    assert np.linalg.matrix_rank(p) == 1
    assert np.linalg.eigvalsh(p).min() > -1e-12
