import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gdq_atlas.algebra.ncpoly import (
    BasisWord, NCPoly, PolyContext, evaluate, from_terms, matrix_unit, monomial, mul, scalar, unit, variable, zero,
)
from gdq_atlas.contracts.errors import ContextMismatchError, SizeMismatchError, VariableIndexError
from gdq_atlas.laws.sampling import random_matrix, random_poly

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _poly(seed, ctx, degree=3):
    return random_poly(ctx, np.random.default_rng(seed), degree)


def test_matrix_units_multiply_by_delta(ctx):
    e00, e01, e10 = matrix_unit(ctx, 0, 0), matrix_unit(ctx, 0, 1), matrix_unit(ctx, 1, 0)
    assert e01 * e10 == e00
    assert (e01 * e01).is_zero()


def test_unit_is_sum_of_diagonal_units(ctx):
    assert unit(ctx) == matrix_unit(ctx, 0, 0) + matrix_unit(ctx, 1, 1)


def test_word_coefficient_after_multiplication(ctx):
    p = matrix_unit(ctx, 0, 0) * variable(ctx, 0) * matrix_unit(ctx, 0, 1) * variable(ctx, 1)
    word = BasisWord(((0, 0), (0, 1), (1, 1)), (0, 1))
    assert p.coefficient(word) == 1
    assert p.degree() == 2
    assert len(list(p.terms())) == 2  # X_1 = Σ_rs e_rr X_1 e_ss 留下 s ∈ {0, 1}


def test_star_reverses_words(ctx):
    x0, x1 = variable(ctx, 0), variable(ctx, 1)
    p = matrix_unit(ctx, 0, 0) * x0 * matrix_unit(ctx, 0, 1) * x1
    assert p.star() == x1 * matrix_unit(ctx, 1, 0) * x0 * matrix_unit(ctx, 0, 0)
    assert (p.scale(2j)).star() == p.star().scale(-2j)


def test_grade_multiplies_by_one_plus_degree(ctx):
    x0 = variable(ctx, 0)
    p = x0 * x0 + scalar(ctx, 3)
    assert p.grade() == (x0 * x0).scale(3) + scalar(ctx, 3)


def test_truncated_product_drops_high_degree(ctx):
    x0 = variable(ctx, 0)
    p = x0 + x0 * x0
    assert mul(p, p, max_degree=2) == x0 * x0


def test_from_terms_accumulates_duplicates(ctx):
    word = BasisWord(((0, 1), (1, 0)), (1,))
    p = from_terms(ctx, [(word, 1), (word, 2j)])
    assert p == monomial(ctx, word, 1 + 2j)


def test_evaluate_units_and_variables(ctx, rng):
    a, b = random_matrix(rng, 4, 4), random_matrix(rng, 4, 4)
    x0 = variable(ctx, 0)
    np.testing.assert_allclose(evaluate(x0 * x0, [a, b]), a @ a)
    e01 = np.kron(np.eye(2), np.array([[0, 1], [0, 0]]))
    np.testing.assert_allclose(evaluate(matrix_unit(ctx, 0, 1), [a, b]), e01)


def test_evaluate_rejects_bad_points(ctx):
    with pytest.raises(SizeMismatchError):
        evaluate(variable(ctx, 0), [np.eye(4)])
    with pytest.raises(SizeMismatchError):
        evaluate(variable(ctx, 0), [np.eye(3), np.eye(3)])


def test_variable_index_checked(ctx):
    with pytest.raises(VariableIndexError):
        variable(ctx, 2)


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        variable(PolyContext(2, 2), 0) * variable(PolyContext(1, 2), 0)


def test_json_words_alternate_units_and_letters(ctx):
    p = matrix_unit(ctx, 0, 1) * variable(ctx, 1) * matrix_unit(ctx, 1, 1)
    payload = p.to_json()
    assert payload["terms"] == [{"word": [[0, 1], 1, [1, 1]], "coeff": [1.0, 0.0]}]
    assert NCPoly.from_json(ctx, payload) == p


def test_bad_word_sequence():
    with pytest.raises(ValueError):
        BasisWord.from_sequence([[0, 0], 1])


@settings(max_examples=40, deadline=None)
@given(seeds, seeds, seeds)
def test_multiplication_is_associative(s1, s2, s3):
    ctx = PolyContext(q=2, n=2)
    p, r, s = _poly(s1, ctx), _poly(s2, ctx), _poly(s3, ctx)
    assert (p * r) * s == p * (r * s)


@settings(max_examples=40, deadline=None)
@given(seeds, seeds)
def test_star_is_antimultiplicative(s1, s2):
    ctx = PolyContext(q=2, n=3)
    p, r = _poly(s1, ctx), _poly(s2, ctx)
    assert (p * r).star() == r.star() * p.star()
    assert p.star().star() == p


@settings(max_examples=25, deadline=None)
@given(seeds, seeds, st.integers(min_value=1, max_value=3))
def test_evaluation_is_multiplicative(s1, s2, m):
    ctx = PolyContext(q=2, n=2)
    p, r = _poly(s1, ctx, 2), _poly(s2, ctx, 2)
    rng = np.random.default_rng(s1 ^ s2)
    point = [random_matrix(rng, 2 * m, 2 * m, 0.5) for _ in range(2)]
    np.testing.assert_allclose(evaluate(p * r, point), evaluate(p, point) @ evaluate(r, point), atol=1e-9)


def test_zero_and_scalar_parts(ctx):
    assert zero(ctx).is_zero()
    assert scalar(ctx, 2).is_scalar()
    assert not variable(ctx, 0).is_scalar()
    np.testing.assert_array_equal(scalar(ctx, 2).b_part(), 2 * np.eye(2))
