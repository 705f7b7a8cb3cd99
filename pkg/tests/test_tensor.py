import pytest

from gdq_atlas.algebra.ncpoly import PolyContext, matrix_unit, unit, variable
from gdq_atlas.algebra.tensor import TensorPoly, leg_bounds, tensor
from gdq_atlas.contracts.errors import SizeMismatchError
from gdq_atlas.laws.sampling import random_poly


def test_leg_bounds():
    assert leg_bounds(((), (0,), (1, 0))) == [(0, 2), (2, 6), (6, 12)]


def test_tensor_of_units(ctx):
    one = unit(ctx)
    t = tensor(one, one)
    assert t.order == 2
    assert t.keys() == [((), ())]
    assert t.norm() == 4.0


def test_apply_dq_splits_words(ctx):
    x0, x1 = variable(ctx, 0), variable(ctx, 1)
    e01 = matrix_unit(ctx, 0, 1)
    t = TensorPoly.from_poly(x0 * e01 * x0).apply_dq(0, leg=0)
    assert t == tensor(unit(ctx), e01 * x0) + tensor(x0 * e01, unit(ctx))
    assert TensorPoly.from_poly(x1).apply_dq(0).is_zero()


def test_mul_leg(ctx):
    x0, x1 = variable(ctx, 0), variable(ctx, 1)
    t = tensor(x0, x1)
    assert t.mul_leg(1, right=x0) == tensor(x0, x1 * x0)
    assert t.mul_leg(0, left=x1, right=x1) == tensor(x1 * x0 * x1, x1)
    assert t.mul_leg(1, right=x0, max_degree=2).is_zero()


def test_star_and_flip(ctx):
    x0 = variable(ctx, 0)
    e01, e10 = matrix_unit(ctx, 0, 1), matrix_unit(ctx, 1, 0)
    t = tensor(e01 * x0, x0.scale(1j))
    assert t.star() == tensor(x0 * e10, x0.scale(-1j))
    assert t.flip() == tensor(x0.scale(1j), e01 * x0)
    assert t.flip().flip() == t


def test_permute_legs_rejects_non_permutation(ctx):
    t = tensor(unit(ctx), unit(ctx))
    with pytest.raises(ValueError):
        t.permute_legs([0, 0])


def test_grade_leg_and_truncate(ctx):
    x0 = variable(ctx, 0)
    t = tensor(x0 * x0, x0)
    assert t.grade_leg(0) == t.scale(3)
    assert t.grade_leg(1) == t.scale(2)
    assert t.truncate(2).is_zero()
    assert t.total_degree() == 3


def test_addition_needs_same_order(ctx):
    one = unit(ctx)
    with pytest.raises(SizeMismatchError):
        tensor(one, one) + tensor(one, one, one)


def test_truncated_tensor_product(ctx, rng):
    p = random_poly(ctx, rng, 3)
    r = random_poly(ctx, rng, 3)
    full = tensor(p, r)
    assert tensor(p, r, max_degree=2) == full.truncate(2)


def test_json_lists_words_per_leg():
    ctx = PolyContext(q=1, n=1)
    x = variable(ctx, 0)
    payload = tensor(x, unit(ctx)).to_json()
    assert payload["order"] == 2
    assert payload["terms"] == [{"words": [[[0, 0], 0, [0, 0]], [[0, 0]]], "coeff": [1.0, 0.0]}]


def test_apply_combo_weights(ctx):
    x0, x1 = variable(ctx, 0), variable(ctx, 1)
    got = TensorPoly.from_poly(x0 + x1).apply_combo([2, -1j])
    one = unit(ctx)
    assert got == tensor(one, one).scale(2 - 1j)
    with pytest.raises(SizeMismatchError):
        TensorPoly.from_poly(x0).apply_combo([1])
