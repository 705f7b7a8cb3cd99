import numpy as np
import pytest

from gdq_atlas.algebra.ncpoly import PolyContext, variable
from gdq_atlas.contracts.errors import (
    DomainViolationError, SingularRuleError, SizeMismatchError, ValueSpaceError,
)
from gdq_atlas.matricial.fm import (
    Disk, DiskComplement, FuncCalc, HalfPlane, Intersection, Plane, PolyEval, ResolventFunc, ResolventSet,
    SpectrumSet, Union, check_fm_laws, fm_combine, fm_eval, fm_membership, intersect, norm_K,
    region_from_json,
)
from gdq_atlas.matricial.resolvent import ResolventPoint, resolve

SQUARE = FuncCalc.polynomial([0, 0, 1], Disk(0, 4), label="square")


def test_square_of_triangular_point():
    out = fm_eval(SQUARE, 2, np.array([[1, 1], [0, 3]]))
    np.testing.assert_allclose(out, [[1, 4], [0, 9]])


def test_point_outside_domain():
    with pytest.raises(DomainViolationError) as err:
        fm_eval(SQUARE, 1, np.array([[5.0]]))
    assert err.value.size == 1
    with pytest.raises(SizeMismatchError):
        fm_eval(SQUARE, 2, np.eye(3))


def test_rational_rule():
    inv = FuncCalc.rational([1], [2, -1], Disk(0, 1.5))
    t = np.array([[0.5, 1.0], [0.0, -0.5]])
    np.testing.assert_allclose(fm_eval(inv, 2, t), np.linalg.inv(2 * np.eye(2) - t))
    assert inv.scalar(1.0) == pytest.approx(1.0)
    with pytest.raises(SingularRuleError):
        FuncCalc.rational([1], [2, -1])._eval(np.array([[2.0]]))


def test_regions():
    assert Disk(1, 1).contains(1.5) and not Disk(1, 1).contains(2.5)
    half = HalfPlane(1, 0.0)
    assert half.contains(-1 + 5j) and not half.contains(1)
    assert DiskComplement(0, 1).contains(3j)
    assert Union((Disk(-3, 1), Disk(3, 1))).contains(3.2)
    assert Plane().contains(1e9)
    assert Disk(1j, 1).adjoint() == Disk(-1j, 1)
    for region in (Disk(0.5j, 2), half, DiskComplement(1, 2), Union((Disk(0, 1), Plane())), Plane()):
        assert region_from_json(region.to_json()) == region
    with pytest.raises(ValueError):
        region_from_json({"kind": "annulus"})


def test_spectrum_set_sampling_and_margin(rng):
    omega = SpectrumSet(Disk(0, 1), 2)
    point = omega.sample(2, rng)
    assert point.shape == (4, 4)
    assert fm_membership(omega, 2, point)
    assert 0 < omega.margin(point) <= 1
    assert omega.margin(3 * np.eye(4)) == 0.0
    with pytest.raises(SizeMismatchError):
        fm_membership(omega, 1, point)
    assert omega.is_self_adjoint()
    assert not SpectrumSet(Disk(1j, 1)).is_self_adjoint()


def test_resolvent_set(hermitian_site, full_site, rng):
    omega = ResolventSet(hermitian_site)
    assert omega.block == 2 and omega.is_self_adjoint()
    assert not ResolventSet(full_site).is_self_adjoint()
    point = omega.sample(2, rng)
    assert omega.contains(point)
    assert omega.margin(point) == pytest.approx(1 / np.linalg.norm(resolve(hermitian_site, point), 2))
    assert not omega.contains(np.ones((2, 2)))


def test_intersection(rng):
    both = Intersection([SpectrumSet(Disk(0, 2)), SpectrumSet(HalfPlane(1, 0.0))])
    point = both.sample(2, rng)
    assert both.contains(point)
    assert all(z.real < 0 for z in np.linalg.eigvals(point))
    assert intersect(SpectrumSet(Plane()), SpectrumSet(Plane())) == SpectrumSet(Plane())
    with pytest.raises(SizeMismatchError):
        Intersection([SpectrumSet(Plane(), 1), SpectrumSet(Plane(), 2)])
    with pytest.raises(ValueError):
        Intersection([])
    empty = Intersection([SpectrumSet(Disk(-3, 1)), SpectrumSet(Disk(3, 1))], tries=5)
    with pytest.raises(DomainViolationError):
        empty.sample(1, rng)


def test_combine_nodes(rng):
    cube = FuncCalc.polynomial([0, 0, 0, 1])
    t = SpectrumSet(Disk(0, 2)).sample(2, rng)
    zero = fm_combine("add", SQUARE, fm_combine("scale", SQUARE, scalar=-1))
    np.testing.assert_allclose(fm_eval(zero, 2, t), 0, atol=1e-12)
    fifth = fm_combine("mul", SQUARE, cube)
    np.testing.assert_allclose(fm_eval(fifth, 2, t), np.linalg.matrix_power(t, 5), atol=1e-10)
    shifted = FuncCalc.polynomial([1j, 0, 1], Disk(1j, 3))
    starred = fm_combine("star", shifted)
    g = starred.domain.sample(2, rng)
    np.testing.assert_allclose(fm_eval(starred, 2, g), shifted.star_rule()._eval(g), atol=1e-10)
    assert fm_combine("star", starred) is shifted
    with pytest.raises(ValueError):
        fm_combine("div", SQUARE, cube)
    with pytest.raises(ValueError):
        fm_combine("add", SQUARE)


def test_incompatible_value_spaces(hermitian_site):
    with pytest.raises(ValueSpaceError):
        fm_combine("add", SQUARE, ResolventFunc(hermitian_site))


def test_poly_eval(rng):
    ctx = PolyContext(2, 1)
    x = variable(ctx, 0)
    poly = x * x
    f = PolyEval(poly)
    t = f.domain.random_point(2, rng)
    np.testing.assert_allclose(fm_eval(f, 2, t), t @ t, atol=1e-12)
    with pytest.raises(SizeMismatchError):
        PolyEval(variable(PolyContext(2, 2), 0))
    with pytest.raises(SizeMismatchError):
        PolyEval(poly, SpectrumSet(Plane(), 3))


def test_resolvent_func(hermitian_site, rng):
    f = ResolventFunc(hermitian_site)
    pt = ResolventPoint.random(hermitian_site, 1, rng)
    np.testing.assert_allclose(fm_eval(f, 1, pt.matrix), resolve(hermitian_site, pt))
    assert f.block_out == 2


def test_norm_k():
    point = np.array([[0.5]])
    assert norm_K(SQUARE, [(1, point)], eps=0.1) == pytest.approx(0.25)
    with pytest.raises(DomainViolationError):
        norm_K(SQUARE, [(1, np.array([[3.95]]))], eps=0.1)
    with pytest.raises(ValueError):
        norm_K(SQUARE, [(1, point)], eps=0.0)


@pytest.mark.parametrize("make", [
    lambda site: SQUARE,
    lambda site: FuncCalc.rational([1], [2, -1], Disk(0, 1.5), label="inverse"),
    lambda site: ResolventFunc(site, label="resolvent"),
])
def test_fm_suite_passes(make, small_config, hermitian_site):
    f = make(hermitian_site)
    reports = check_fm_laws(f, small_config, f.label)
    assert {r.law.split(":")[0] for r in reports} >= {"set_direct_sum", "set_similarity", "fm_direct_sum", "fm_similarity", "corner_shape", "star_law"}
    for r in reports:
        assert r.passed, (r.law, r.defect)
    names = [r.law for r in reports]
    assert ("spectrum_similarity:" + f.label in names) == isinstance(f.domain, SpectrumSet)
