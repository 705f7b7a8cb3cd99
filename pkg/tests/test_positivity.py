import pytest

from gdq_atlas.contracts.errors import (
    DomainViolationError, NonHermitianChoiError, SizeMismatchError, ValueSpaceError,
)
from gdq_atlas.matricial.fm import Disk, FuncCalc, ResolventFunc, fm_combine
from gdq_atlas.matricial.fmdq import CornerMap
from gdq_atlas.matricial.positivity import (
    ChoiMatrix, check_choi_fixtures, cp_check, dual_positive, positive_map_check,
)

INVERSE = FuncCalc.rational([1], [2, -1], Disk(0, 1.5))


def linear(fn, n=2):
    return CornerMap.from_linear_map(fn, n, n)


def test_transpose_is_positive_not_completely_positive(rng):
    transpose = linear(lambda h: h.T)
    assert ChoiMatrix.from_map(transpose).min_eigenvalue() == pytest.approx(-1.0)
    report = cp_check(transpose)
    assert not report.passed
    assert report.details["min_eigenvalue"] == pytest.approx(-1.0)
    assert positive_map_check(transpose, 100, rng).passed


def test_identity_and_kraus_maps(rng):
    assert ChoiMatrix.from_map(linear(lambda h: h)).min_eigenvalue() == pytest.approx(0.0, abs=1e-12)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    kraus = linear(lambda h: a @ h @ a.conj().T, 3)
    assert cp_check(kraus).passed
    assert positive_map_check(kraus, 50, rng).passed


def test_negative_map_has_witness(rng):
    report = positive_map_check(linear(lambda h: -h), 10, rng)
    assert not report.passed
    assert report.witness is not None
    assert report.details["min_eigenvalue"] < 0


def test_non_hermitian_choi():
    with pytest.raises(NonHermitianChoiError) as err:
        cp_check(linear(lambda h: 1j * h))
    assert err.value.defect > err.value.tolerance


def test_map_shape_checks():
    with pytest.raises(SizeMismatchError):
        ChoiMatrix.from_map(CornerMap.from_linear_map(lambda h: h, 1, 2))


def test_choi_fixtures(small_config):
    reports = check_choi_fixtures(small_config)
    assert [r.law for r in reports] == ["choi_identity", "choi_transpose"]
    assert all(r.passed for r in reports)


def test_inverse_is_dual_positive(small_config):
    reports = dual_positive(INVERSE, small_config, "inverse")
    assert [r.law for r in reports] == ["positive_map:inverse", "completely_positive:inverse", "dual_positive:inverse"]
    assert all(r.passed for r in reports)
    assert reports[2].details["contradictions"] == 0


def test_negated_inverse_is_not_dual_positive(small_config):
    reports = dual_positive(fm_combine("scale", INVERSE, scalar=-1.0), small_config)
    assert not reports[-1].passed
    assert reports[-1].witness is not None


def test_dual_positive_preconditions(small_config, hermitian_site):
    with pytest.raises(ValueSpaceError):
        dual_positive(ResolventFunc(hermitian_site), small_config)
    with pytest.raises(DomainViolationError):
        dual_positive(FuncCalc.rational([1], [2, -1], Disk(0.5j, 1)), small_config)
