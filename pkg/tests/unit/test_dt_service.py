import pytest
from fractions import Fraction

from src.domain.dt.models.dt_case import CASES, DtCase
from src.domain.dt.services.dt_service import DtService, closed_form_shape
from src.domain.dt.services.jacobi_forms import g2_series, wp_series
from src.domain.series.models.window import Window
from src.domain.series.repositories.series_cache import SeriesCache
from src.infrastructure.cli.dependencies import build_services
from src.utils.exceptions import CaseError

WINDOW = Window.from_p(-3, 3)


@pytest.fixture(scope="module")
def dt() -> DtService:
    return build_services(SeriesCache()).dt


def test_case_aliases_and_text():
    assert DtCase("N").case == "Nfib"
    assert str(DtCase("BF", 1)) == "BF(g=1)"
    assert str(DtCase("F")) == "F"
    assert DtCase.parse("F", 3).genus is None
    assert DtCase.parse("BN", 0).g == 0


@pytest.mark.parametrize("case, genus", [("BF", None), ("F", 1), ("X", None), ("BpF", -1)])
def test_invalid_cases(case, genus):
    with pytest.raises(CaseError) as exc:
        DtCase(case, genus)
    assert exc.value.exit_code == 2


def test_closed_form_shapes():
    assert closed_form_shape(DtCase("F")) == (0, 0)
    assert closed_form_shape(DtCase("BF", 0)) == (-2, 1)
    assert closed_form_shape(DtCase("BpF", 1)) == (2, -2)


def test_fiber_class_is_partition_series(dt: DtService):
    series = dt.dt_series(DtCase("F"), 3, WINDOW)
    assert [series.coefficient(d).coefficient(0) for d in range(4)] == [1, 1, 2, 3]


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("genus", [0, 1])
def test_closed_form_matches_vertex_sum(dt: DtService, case: str, genus: int):
    report = dt.dt_series_check(DtCase.parse(case, genus), 2, WINDOW)
    assert report.passed, report.mismatches[:3]
    assert report.check == f"dt-{case}"


@pytest.mark.parametrize("genus", [0, 1])
def test_quotients(dt: DtService, genus: int):
    report = dt.quotient_checks(2, WINDOW, genus)
    assert report.passed, report.mismatches[:3]
    assert report.check == "dt-quotients"


def test_g2_series():
    series = g2_series(3)
    assert [series.coefficient(d).coefficient(0) for d in range(4)] == [Fraction(-1, 24), 1, 3, 4]


def test_wp_series():
    series = wp_series(1, Window.from_p(0, 3))
    assert series.coefficient(0).items() == [(0, Fraction(1, 12)), (2, 1), (4, 2), (6, 3)]
    assert series.coefficient(1).items() == [(-2, 1), (0, -2), (2, 1)]
