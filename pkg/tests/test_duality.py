import numpy as np
import pytest

from gdq_atlas.contracts.errors import SiteFlagError, SizeMismatchError
from gdq_atlas.contracts.mappings import SUITE_LAWS
from gdq_atlas.matricial import duality
from gdq_atlas.matricial.duality import (
    Functional, approximation_probes, check_utransform_laws, converse_witness, dual_mul_check, entry_product_check,
    flip, pairing_check, positivity_transfer_check, trace_flip_check, u_rank, u_transform,
)
from gdq_atlas.matricial.resolvent import ResolventPoint, random_member, resolve

WEIGHT = np.diag([0.7, 0.3])


def test_u_transform_of_swap_at_two(swap_site):
    u = u_transform(swap_site, Functional.normalized_trace(2))
    np.testing.assert_allclose(u.evaluate(2.0 * np.eye(2)), [[2 / 3]])
    np.testing.assert_allclose(
        u.evaluate(ResolventPoint.scalar(swap_site, 2, 2.0).matrix), (2 / 3) * np.eye(2), atol=1e-12
    )


def test_functional_blocks_and_flags(rng):
    phi = Functional(WEIGHT)
    big = rng.normal(size=(4, 4))
    blocks = phi.apply_blocks(big)
    assert blocks[1, 0] == pytest.approx(phi.apply(big[2:, :2]))
    assert phi.is_positive() and not phi.is_tracial()
    assert Functional.normalized_trace(3).is_tracial()
    assert not Functional(-np.eye(2)).is_positive()
    assert not Functional(np.array([[0, 1], [0, 0]])).is_hermitian()
    assert Functional.zero(2).apply(big[:2, :2]) == 0
    np.testing.assert_allclose(Functional.from_json(phi.to_json()).weight, WEIGHT)
    np.testing.assert_allclose(Functional(1j * WEIGHT).star().weight, -1j * WEIGHT)
    with pytest.raises(SizeMismatchError):
        Functional(np.ones((2, 3)))


def test_functional_size_must_match_site(hermitian_site):
    with pytest.raises(SizeMismatchError):
        u_transform(hermitian_site, Functional.normalized_trace(3))


def test_resolvent_entry_identities(full_site, rng):
    b1 = random_member(full_site, 2, rng).matrix
    b2 = random_member(full_site, 1, rng).matrix
    phi, psi = Functional(WEIGHT), Functional(rng.normal(size=(2, 2)))
    assert entry_product_check(full_site, b1, b2).passed
    assert dual_mul_check(full_site, phi, psi, b1).passed
    report = pairing_check(full_site, phi, b1, b2)
    assert report.passed and report.details["kappa"] >= 1


def test_flip_is_an_involution(rng):
    xi = rng.normal(size=(6, 6))
    np.testing.assert_allclose(flip(flip(xi, 2, 3), 3, 2), xi)


def test_trace_flip_verdicts(full_site, rng):
    tracial = trace_flip_check(full_site, Functional.normalized_trace(2), rng, samples=4)
    assert tracial.passed and tracial.details["flip_symmetric"]
    assert tracial.details["flip_defect"] <= 1e-9
    weighted = trace_flip_check(full_site, Functional(WEIGHT), rng, samples=4)
    assert weighted.passed
    assert not weighted.details["flip_symmetric"]
    assert weighted.details["disagreements"] == 0


def test_corner_weight_breaks_flip_symmetry(full_site, rng):
    report = trace_flip_check(full_site, Functional(np.diag([1.0, 0.0])), rng, samples=4)
    assert report.passed and report.details["disagreements"] == 0
    assert report.details["flip_defect"] > 1e-3
    assert report.details["commutator_defect"] > 1e-3


def test_u_rank_matches_generated_algebra(swap_site, hermitian_site, rng):
    assert u_rank(swap_site, rng) == swap_site.algebra_dimension() == 2
    assert u_rank(hermitian_site, rng) == 4


def test_approximation_probes(hermitian_site, rng):
    inverse, y = approximation_probes(hermitian_site, rng)
    assert inverse.passed and y.passed
    assert y.details["error_small_eps"] <= y.details["small_eps_bound"]
    assert y.details["small_eps_bound"] == pytest.approx(1e-2)


def test_small_eps_bound_is_part_of_the_defect(hermitian_site, rng, monkeypatch):
    monkeypatch.setattr(duality, "SMALL_EPS_FACTOR", 1e-9)
    _, y = approximation_probes(hermitian_site, rng)
    assert not y.passed
    assert y.witness["eps"] == 1e-3


def test_negative_weight_has_converse_witness(swap_site, small_config):
    star, forward, converse, normalization = positivity_transfer_check(
        swap_site, Functional(-np.eye(2)), small_config
    )
    assert star.passed and normalization.passed
    assert forward.passed and forward.details["vacuous"]
    assert converse.passed and converse.details["witness_found"]
    assert converse.details["value"] == pytest.approx(-1.0)
    assert converse.witness["paired_value"].real == pytest.approx(converse.details["value"])
    assert normalization.details["limit"] == pytest.approx(-2)


@pytest.mark.parametrize("weight, lowest", [(-np.diag([1.0, 2.0]), -2.0), (np.diag([1.0, -0.5]), -0.5)])
def test_converse_witness_from_negative_eigenvector(hermitian_site, rng, weight, lowest):
    found = converse_witness(hermitian_site, Functional(weight), rng)
    assert found is not None
    assert found["construction"] == "eigenvector"
    assert found["value"] == pytest.approx(lowest, abs=1e-6)
    assert found["paired_value"].real == pytest.approx(found["value"], rel=1e-6)
    assert found["image_min_eigenvalue"] < 0
    assert np.linalg.eigvalsh(found["h"])[0] >= -1e-12
    xi = found["xi"]
    assert np.trace(xi @ xi.conj().T @ weight).real == pytest.approx(found["value"])


def test_converse_fails_without_witness(swap_site, small_config):
    converse = positivity_transfer_check(swap_site, Functional(np.diag([1.0, -1.0])), small_config)[2]
    assert not converse.passed
    assert converse.defect == np.inf
    assert converse.details["kind"] == "positive_on_span"
    assert not converse.details["witness_found"]


def test_non_hermitian_weight_converse(swap_site, small_config):
    converse = positivity_transfer_check(swap_site, Functional(np.array([[0, 1j], [0, 0]])), small_config)[2]
    assert converse.details["kind"] == "not_self_adjoint"
    assert converse.passed and converse.witness["star_defect"] > 0


def test_forward_positivity_sweeps_random_weights(hermitian_site, small_config):
    forward = positivity_transfer_check(hermitian_site, Functional(WEIGHT), small_config)[1]
    assert forward.passed and not forward.details["vacuous"]
    assert forward.details["random_weights"] == small_config.positivity_samples
    assert forward.details["min_choi_eigenvalue"] >= -1e-8


def test_normalization_rate(hermitian_site, small_config):
    normalization = positivity_transfer_check(hermitian_site, Functional(WEIGHT), small_config)[3]
    assert normalization.passed
    assert normalization.details["limit"] == pytest.approx(1.0)
    assert normalization.details["rate"] == pytest.approx(-1.0, abs=0.05)
    errors = normalization.details["errors"]
    assert errors[0] > errors[1] > errors[2]


def test_positivity_transfer_needs_flags(full_site, small_config):
    with pytest.raises(SiteFlagError):
        positivity_transfer_check(full_site, Functional(WEIGHT), small_config)


def test_utransform_suite_passes(hermitian_site, small_config):
    reports = check_utransform_laws(hermitian_site, Functional(WEIGHT), small_config)
    assert [r.law for r in reports] == list(SUITE_LAWS["utransform"])
    for r in reports:
        assert r.passed, (r.law, r.defect)
    assert reports[-1].details["injective"]
    by_law = {r.law: r for r in reports}
    assert by_law["pairing"].samples == 2 * small_config.matricial_samples
    assert by_law["u_direct_sum"].details["random_sites"] == small_config.matricial_samples


def test_utransform_suite_skips_positivity_without_flags(full_site, small_config):
    reports = check_utransform_laws(full_site, Functional(WEIGHT), small_config)
    names = [r.law for r in reports]
    assert "forward_positivity" not in names and "u_injectivity" in names
    assert all(r.passed for r in reports)


def test_resolvent_sign_convention(swap_site):
    r = resolve(swap_site, 2.0 * np.eye(2))
    u = u_transform(swap_site, Functional(np.eye(2)))
    np.testing.assert_allclose(u.evaluate(2.0 * np.eye(2)), [[-np.trace(r)]])
