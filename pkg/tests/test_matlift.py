import numpy as np
import pytest

from gdq_atlas.algebra.matlift import (
    DXMap, LiftContext, MatTensor, as_mat_tensor, check_lift_laws, dx_isomorphism, lift_dq, lift_y,
    random_lift_element, scalar_lift,
)
from gdq_atlas.algebra.ncpoly import PolyContext, matrix_unit, unit, variable
from gdq_atlas.algebra.tensor import tensor
from gdq_atlas.contracts.errors import SizeMismatchError
from gdq_atlas.contracts.mappings import SUITE_LAWS
from gdq_atlas.laws.sampling import SamplerConfig, random_matrix


@pytest.fixture
def lctx():
    return LiftContext(p=2, q=1)


def test_variables_are_renumbered_row_major(lctx):
    assert lctx.base == PolyContext(q=1, n=4)
    assert lctx.var(1, 0) == 2
    assert lctx.d_ctx == PolyContext(q=2, n=1)


def test_delta_intertwines(lctx, rng):
    t = random_matrix(rng, 2, 2)
    ident = np.eye(2)
    for i in range(2):
        for j in range(2):
            d = lctx.delta(i, j)
            np.testing.assert_allclose(np.kron(t, ident) @ d, d @ np.kron(ident, t), atol=1e-12)


def test_dq_of_y_is_identity_tensor_identity(lctx):
    one = unit(lctx.base)
    expected = MatTensor(lctx.base, 2, {(a, a, c, c): tensor(one, one) for a in range(2) for c in range(2)})
    assert lift_dq(lctx, lift_y(lctx)) == expected
    assert lift_dq(lctx, lift_y(lctx)).apply_lift(lctx, 0).is_zero()


def test_delta_forms_agree(lctx, rng):
    m = random_lift_element(lctx, rng, 3)
    assert lift_dq(lctx, m) == lift_dq(lctx, m, form="right")
    with pytest.raises(ValueError):
        lift_dq(lctx, m, form="middle")


def test_lifted_leibniz_and_coassociativity(rng):
    lctx = LiftContext(p=2, q=2)
    m = random_lift_element(lctx, rng, 2)
    n = random_lift_element(lctx, rng, 2)
    dm = lift_dq(lctx, m)
    rhs = dm.mul_leg(1, right=n) + lift_dq(lctx, n).mul_leg(0, left=m)
    assert lift_dq(lctx, m.matmul(n)) == rhs
    assert dm.apply_lift(lctx, 0) == dm.apply_lift(lctx, 1)


def test_scalar_lift_is_in_kernel(lctx, rng):
    assert lift_dq(lctx, scalar_lift(lctx, random_matrix(rng, 2, 2))).is_zero()


def test_as_mat_tensor_is_compatible_with_products(lctx, rng):
    m = random_lift_element(lctx, rng, 2)
    n = random_lift_element(lctx, rng, 2)
    assert as_mat_tensor(m).mul_leg(0, right=n) == as_mat_tensor(m.matmul(n))
    assert as_mat_tensor(m).norm() == m.norm()


def test_dx_map_sends_x_to_y(lctx):
    phi = DXMap(lctx)
    assert phi(variable(phi.d_ctx, 0)) == lift_y(lctx)
    e = matrix_unit(phi.d_ctx, 0, 1)
    assert phi(e) == scalar_lift(lctx, np.array([[0, 1], [0, 0]]))


def test_dx_isomorphism_report(lctx):
    _, report = dx_isomorphism(lctx, SamplerConfig(seed=5, samples=20, max_degree=3))
    assert report.passed and report.defect == 0.0


def test_wrong_size_rejected(lctx):
    other = LiftContext(p=3, q=1)
    with pytest.raises(SizeMismatchError):
        lift_dq(lctx, lift_y(other))
    with pytest.raises(SizeMismatchError):
        LiftContext(p=2, weights=np.eye(3))


def test_lift_suite_passes(small_config):
    reports = check_lift_laws(small_config)
    assert [r.law for r in reports] == list(SUITE_LAWS["lift"])
    for r in reports:
        assert r.passed, r.law
