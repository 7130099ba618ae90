import pytest
from fractions import Fraction

from src.domain.identities.models.report import FAIL, PASS, IdentityReport, Mismatch, series_mismatches
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.infrastructure.serialization.json_codec import (
    decode_report,
    decode_series,
    dumps,
    encode_qseries,
    encode_report,
    encode_series,
    loads,
)
from src.infrastructure.serialization.text_codec import render_text
from src.utils.exceptions import VertexError


@pytest.fixture
def failing_report() -> IdentityReport:
    series = QSeries([PSeries({0: 1}, top=4), PSeries({-2: Fraction(1, 2)}, top=4)])
    report = IdentityReport(
        check="identity-3",
        params={"id": 3, "qmax": 1, "pmax": Fraction(2)},
        mismatches=[Mismatch.at(Fraction(1, 2), 0, check="lhs_rhs", q=1, p=-1)],
        series={"lhs": series},
    )
    report.timings["total"] = 0.5
    return report


def test_status_is_derived():
    assert IdentityReport(check="empty").status == PASS
    report = IdentityReport(check="bad", status=PASS, mismatches=[Mismatch.at(1, 2)])
    assert report.status == FAIL
    assert not report.passed


def test_merged_tags_sub_checks():
    head = IdentityReport(check="bo-two")
    part = IdentityReport(check="two_point", mismatches=[Mismatch.at(1, 2, q=0, p=2)],
                          series={"closed_form": QSeries.one(0)})
    merged = head.merged([part])
    assert merged.check == "bo-two"
    assert merged.mismatches[0].check == "two_point"
    assert "two_point.closed_form" in merged.series
    assert merged.status == FAIL


def test_mismatch_rows_use_half_integer_text():
    rows = series_mismatches([(2, -3, Fraction(1, 3), 0)], "lhs_rhs")
    assert rows[0].p == "-3/2"
    assert rows[0].lhs == "1/3"
    assert rows[0].q == 2


def test_encode_report_schema(failing_report: IdentityReport):
    data = encode_report(failing_report, version="1.0.0")
    assert sorted(data) == ["check", "mismatches", "params", "series", "status"]
    assert data["status"] == FAIL
    assert data["params"]["version"] == "1.0.0"
    assert data["params"]["pmax"] == "2"
    assert data["mismatches"] == [{"check": "lhs_rhs", "q": 1, "p": "-1/2", "lhs": "1/2", "rhs": "0"}]
    assert "timings" not in dumps(data)


def test_encode_qseries():
    data = encode_qseries(QSeries([PSeries({0: 1}, top=4), PSeries.zero(4), PSeries({2: -1}, top=6)]))
    assert data == {"qorder": 2, "pwindow": [0, 4], "coeffs": [[0, [[0, "1"]]], [2, [[2, "-1"]]]]}
    shifted = encode_qseries(QSeries.one(1).with_offset(Fraction(-1, 24)))
    assert shifted["qoffset"] == "-1/24"


def test_report_survives_json(failing_report: IdentityReport):
    decoded = decode_report(loads(dumps(encode_report(failing_report))))
    assert decoded.status == FAIL
    assert decoded.mismatches == failing_report.mismatches
    assert decoded.series["lhs"].coefficient(1).coefficient(-2) == Fraction(1, 2)


def test_unknown_series_kind():
    with pytest.raises(VertexError):
        decode_series({"kind": "matrix"})
    with pytest.raises(TypeError):
        encode_series(3)


def test_dumps_is_key_ordered():
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')


def test_render_text(failing_report: IdentityReport):
    text = render_text(failing_report, version="1.0.0")
    lines = text.splitlines()
    assert lines[0] == "check: identity-3"
    assert lines[1] == "status: FAIL"
    assert "  version: 1.0.0" in lines
    assert "mismatches: 1" in lines
    assert "  check=lhs_rhs q=1 p=-1/2: lhs=1/2 rhs=0" in lines
    assert "total" not in text
