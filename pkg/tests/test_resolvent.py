import numpy as np
import pytest
from scipy import linalg

from gdq_atlas.contracts.errors import (
    NotInResolventSetError, SiteFlagError, SiteValidationError, SizeMismatchError,
)
from gdq_atlas.contracts.mappings import SUITE_LAWS
from gdq_atlas.matricial.resolvent import (
    ResolventPoint, Site, check_resolvent_laws, membership, random_member, random_site, resolve,
)

SWAP = np.array([[0, 1], [1, 0]])


def test_scalar_point_resolve():
    site = Site.scalar(SWAP)
    pt = ResolventPoint.scalar(site, 1, 2.0)
    ok, cond = membership(site, pt)
    assert ok
    assert cond == pytest.approx(3.0)
    np.testing.assert_allclose(resolve(site, pt), np.array([[-2, -1], [-1, -2]]) / 3, atol=1e-12)


def test_spectrum_point_is_rejected():
    site = Site.scalar(SWAP)
    pt = ResolventPoint.scalar(site, 2, 1.0)
    assert not membership(site, pt)[0]
    with pytest.raises(NotInResolventSetError) as err:
        resolve(site, pt)
    assert err.value.size == 2


def test_site_validation():
    with pytest.raises(SiteValidationError):
        Site.create([np.eye(2), 2 * np.eye(2)], SWAP)
    with pytest.raises(SiteValidationError):
        Site.create([np.array([[1, 0], [0, 0]])], SWAP)
    with pytest.raises(SiteValidationError):
        Site.create([np.eye(2)], np.ones((2, 3)))
    upper = np.array([[0, 1], [0, 0]])
    with pytest.raises(SiteValidationError):
        Site.create([np.eye(2), upper], SWAP, {"star_closed": True})
    with pytest.raises(SiteValidationError):
        Site.create([np.eye(2)], SWAP, {"commutative": True})


def test_site_flags(hermitian_site, full_site):
    assert hermitian_site.is_algebra and hermitian_site.is_star_closed and hermitian_site.y_selfadjoint
    assert full_site.is_algebra and not full_site.y_selfadjoint
    with pytest.raises(SiteFlagError) as err:
        full_site.require("algebra", "y_selfadjoint")
    assert err.value.flags == ("y_selfadjoint",)
    assert Site.create([np.eye(2), np.array([[0, 1], [0, 0]])], SWAP).is_algebra


def test_site_json_and_adjoint(full_site):
    again = Site.from_json(full_site.to_json())
    assert again.d == 2 and again.dim_b == 4
    np.testing.assert_allclose(again.y, full_site.y)
    np.testing.assert_allclose(full_site.adjoint().y, full_site.y.conj().T)
    bad = {**full_site.to_json(), "d": 3}
    with pytest.raises(SiteValidationError):
        Site.from_json(bad)


def test_algebra_dimension(hermitian_site, swap_site):
    assert swap_site.algebra_dimension() == 2
    assert hermitian_site.algebra_dimension() == 4


def test_points_and_blocks(hermitian_site, rng):
    pt = ResolventPoint.random(hermitian_site, 2, rng)
    assert hermitian_site.in_mn_b(pt.matrix)
    again = ResolventPoint.from_blocks(hermitian_site, pt.matrix)
    np.testing.assert_allclose(again.coeffs, pt.coeffs, atol=1e-12)
    with pytest.raises(SiteValidationError):
        ResolventPoint.from_blocks(hermitian_site, np.ones((2, 2)))
    with pytest.raises(SizeMismatchError):
        ResolventPoint.from_coeffs(hermitian_site, np.zeros((2, 2, 3)))
    with pytest.raises(SizeMismatchError):
        membership(hermitian_site, np.eye(3))


def test_direct_sum_and_conjugation(hermitian_site, rng):
    b1 = random_member(hermitian_site, 1, rng)
    b2 = random_member(hermitian_site, 2, rng)
    total = b1.direct_sum(b2)
    np.testing.assert_allclose(
        resolve(hermitian_site, total),
        linalg.block_diag(resolve(hermitian_site, b1), resolve(hermitian_site, b2)),
        atol=1e-10,
    )
    s = np.array([[1, 2, 0], [0, 1, 1], [1, 0, 1]], dtype=complex)
    conj = total.conjugate(s)
    lifted = np.kron(s, np.eye(2))
    np.testing.assert_allclose(
        resolve(hermitian_site, conj),
        lifted @ resolve(hermitian_site, total) @ np.linalg.inv(lifted),
        atol=1e-9,
    )
    np.testing.assert_allclose(ResolventPoint.from_coeffs(hermitian_site, conj.coeffs).matrix, conj.matrix, atol=1e-12)


def test_upper_triangular_corner(swap_site, rng):
    b1 = ResolventPoint.scalar(swap_site, 1, 2.0)
    b2 = ResolventPoint.scalar(swap_site, 1, 3.0)
    tri = b1.upper_triangular(swap_site, np.ones((1, 1, 1)), b2)
    r = resolve(swap_site, tri)
    np.testing.assert_allclose(r[:2, :2], resolve(swap_site, b1), atol=1e-12)
    np.testing.assert_allclose(r[2:, 2:], resolve(swap_site, b2), atol=1e-12)
    np.testing.assert_allclose(r[2:, :2], 0, atol=1e-12)
    with pytest.raises(SizeMismatchError):
        b1.upper_triangular(swap_site, np.ones((2, 1, 1)), b2)


def test_random_site_kinds(rng):
    for kind in ("scalar", "diagonal", "full", "subspace", "hermitian"):
        site = random_site(rng, 3, kind)
        assert site.d == 3
    assert random_site(rng, 2, "hermitian").y_selfadjoint
    with pytest.raises(ValueError):
        random_site(rng, 2, "triangular")


def test_resolvent_suite_passes(small_config, hermitian_site):
    for site in (None, hermitian_site):
        reports = check_resolvent_laws(small_config, site)
        assert [r.law for r in reports] == list(SUITE_LAWS["resolvent"])
        for r in reports:
            assert r.passed, (r.law, r.defect)
