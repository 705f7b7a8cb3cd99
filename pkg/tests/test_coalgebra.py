import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gdq_atlas.algebra.coalgebra import (
    check_gdq_laws, check_psi_recovery, combo_dq, iterate_dq, leibniz_rhs, partial_dq, psi_embed,
)
from gdq_atlas.algebra.ncpoly import PolyContext, from_matrix, matrix_unit, unit, variable
from gdq_atlas.algebra.tensor import tensor
from gdq_atlas.contracts.errors import DegreeError
from gdq_atlas.contracts.mappings import SUITE_LAWS
from gdq_atlas.laws.sampling import SamplerConfig, random_b, random_poly

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_dq_of_variable_is_one_tensor_one(ctx):
    one = unit(ctx)
    assert partial_dq(0, variable(ctx, 0)) == tensor(one, one)
    assert partial_dq(1, variable(ctx, 0)).is_zero()
    assert partial_dq(0, from_matrix(ctx, np.array([[1, 2], [3, 4]]))).is_zero()


def test_dq_on_sandwiched_word(ctx):
    x0 = variable(ctx, 0)
    b = matrix_unit(ctx, 1, 0)
    one = unit(ctx)
    assert partial_dq(0, x0 * b * x0) == tensor(one, b * x0) + tensor(x0 * b, one)


def test_iterate_dq_on_cube(scalar_ctx):
    x = variable(scalar_ctx, 0)
    one = unit(scalar_ctx)
    expected = tensor(one, one, x) + tensor(one, x, one) + tensor(x, one, one)
    assert iterate_dq(2, 0, x * x * x) == expected
    with pytest.raises(ValueError):
        iterate_dq(0, 0, x)


def test_psi_embed_and_recovery(ctx, rng):
    factors = [random_b(ctx, rng) for _ in range(3)]
    p = psi_embed(factors, 1)
    assert p.degree() == 2
    assert iterate_dq(2, 1, p) == tensor(*factors)
    assert iterate_dq(3, 1, p).is_zero()


def test_psi_embed_rejects_variables(ctx):
    with pytest.raises(DegreeError) as exc:
        psi_embed([unit(ctx), variable(ctx, 0)], 0)
    assert exc.value.position == 1


@settings(max_examples=30, deadline=None)
@given(seeds, seeds)
def test_leibniz_and_coassociativity(s1, s2):
    ctx = PolyContext(q=2, n=2)
    rng = np.random.default_rng([s1, s2])
    p, r = random_poly(ctx, rng, 3), random_poly(ctx, rng, 2)
    for i in range(ctx.n):
        dq = lambda f, i=i: partial_dq(i, f)
        assert dq(p * r) == leibniz_rhs(dq, p, r)
        d = dq(p + r)
        assert d.apply_dq(i, 0) == d.apply_dq(i, 1)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_star_coproduct(s):
    ctx = PolyContext(q=2, n=2)
    p = random_poly(ctx, np.random.default_rng(s), 4)
    assert partial_dq(0, p.star()) == partial_dq(0, p).star().flip()


def test_combo_is_weighted_sum(ctx, rng):
    p = random_poly(ctx, rng, 3)
    assert combo_dq([2, 1j], p) == partial_dq(0, p).scale(2) + partial_dq(1, p).scale(1j)


def test_gdq_suite_passes_exactly(small_config):
    reports = check_gdq_laws(small_config)
    assert [r.law for r in reports] == list(SUITE_LAWS["gdq"])
    for r in reports:
        assert r.passed, r.law
        if r.law != "evaluate_homomorphism":
            assert r.defect == 0.0, r.law


def test_psi_recovery_up_to_order_four():
    config = SamplerConfig(seed=3, q=2, n=3, samples=20, psi_max=4)
    recovery, annihilation = check_psi_recovery(config, config.context(), config.rng("psi"))
    assert recovery.defect == 0.0 and annihilation.defect == 0.0
    assert recovery.samples == 2 * 4
