import numpy as np
import pytest

from gdq_atlas.algebra.ncpoly import BasisWord, PolyContext, scalar, unit, variable
from gdq_atlas.algebra.series import (
    MatOverSeries, check_corep_laws, corep_build, corep_defect, corep_residual, series_invert,
)
from gdq_atlas.contracts.errors import SeriesInversionError, SizeMismatchError
from gdq_atlas.contracts.mappings import SUITE_LAWS
from gdq_atlas.laws.sampling import random_gl, random_matrix


def test_neumann_inverse_of_one_minus_x(scalar_ctx):
    x = variable(scalar_ctx, 0)
    a = MatOverSeries([[unit(scalar_ctx) - x]], order=4)
    expected = MatOverSeries([[unit(scalar_ctx) + x + x * x + x * x * x + x * x * x * x]], order=4)
    assert series_invert(a) == expected


def test_inverse_is_two_sided(ctx, rng):
    n = random_gl(rng, 4)
    a = MatOverSeries.from_blocks(ctx, n, 5) - MatOverSeries.variable_diag(ctx, 2, 1, 5)
    inv = series_invert(a)
    one = MatOverSeries.identity(ctx, 2, 5)
    assert (a * inv - one).norm() < 1e-10
    assert (inv * a - one).norm() < 1e-10


def test_invert_rejects_singular_degree0(ctx):
    a = MatOverSeries.from_blocks(ctx, np.zeros((2, 2)), 3)
    with pytest.raises(SeriesInversionError):
        series_invert(a)
    with pytest.raises(ValueError):
        series_invert(MatOverSeries.identity(ctx, 1))


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2])
def test_unit_matrix_is_not_a_corepresentation(p, q):
    ctx = PolyContext(q=q, n=1)
    assert corep_defect(MatOverSeries.identity(ctx, p, 6), 0) == p * q * q


def test_scalar_resolvent_is_a_corepresentation(scalar_ctx):
    alpha = corep_build("resolvent", {"n": np.array([[2.0]])}, scalar_ctx, order=6)
    # (2 − X)⁻¹ = Σ X^k / 2^(k+1)
    x2 = BasisWord(((0, 0), (0, 0), (0, 0)), (0, 0))
    assert abs(alpha.entry(0, 0).coefficient(x2) - 0.125) < 1e-15
    assert corep_defect(alpha, 0) < 1e-12


@pytest.mark.parametrize("kind", ["resolvent", "sandwich", "moebius_left", "moebius_right"])
def test_constructors_give_corepresentations(ctx, rng, kind):
    pq = 4
    n = random_gl(rng, pq, low=1.0, high=2.0)
    params = {
        "resolvent": {"n": n},
        "sandwich": {
            "beta1": random_matrix(rng, pq, pq, 0.25),
            "beta2": random_gl(rng, pq, low=1.0, high=2.0),
            "beta3": random_matrix(rng, pq, pq, 0.25),
        },
    }
    xi = corep_build("resolvent", {"n": n}, ctx, order=5, var=1)
    params["moebius_left"] = params["moebius_right"] = {"xi": xi, "beta": random_matrix(rng, pq, pq, 0.25)}
    alpha = corep_build(kind, params[kind], ctx, order=5, var=1)
    assert corep_defect(alpha, 1) < 1e-10
    # 另一个变量上 ∂_0 α = 0，残差只剩 −α ⊗ α
    assert corep_residual(alpha, 0)[0][0].norm() > 0


def test_star_maps_corepresentations_to_corepresentations(ctx, rng):
    xi = corep_build("resolvent", {"n": random_gl(rng, 2, low=1.0, high=2.0)}, ctx, order=4)
    assert corep_defect(xi.star(), 0) < 1e-10


def test_unknown_constructor(ctx):
    with pytest.raises(ValueError):
        corep_build("cayley", {}, ctx, order=3)


def test_size_mismatch(ctx):
    with pytest.raises(SizeMismatchError):
        MatOverSeries.identity(ctx, 2) + MatOverSeries.identity(ctx, 3)
    with pytest.raises(SizeMismatchError):
        MatOverSeries.from_blocks(ctx, np.eye(3))


def test_truncation_applies_to_products(scalar_ctx):
    x = variable(scalar_ctx, 0)
    a = MatOverSeries([[x + scalar(scalar_ctx, 1)]], order=2)
    assert (a * a * a).degree() == 2


def test_corep_suite_passes(small_config):
    reports = check_corep_laws(small_config)
    assert [r.law for r in reports] == list(SUITE_LAWS["corep"])
    failed = [r.law for r in reports if not r.passed]
    assert failed == []
    unit_report = reports[-1]
    assert unit_report.defect == 0.0
