import json
from fractions import Fraction
from typing import Any, Dict, List, Optional

from src.domain.identities.models.report import IdentityReport
from src.domain.series.models.agraded import AGradedSeries
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.utils.exceptions import VertexError

_SERIES_KINDS = ("pseries", "qseries", "agraded")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise VertexError(f"Malformed rational coefficient '{text}'.", text=text)


def encode_terms(series: PSeries) -> List[List[Any]]:
    return [[e, str(c)] for e, c in series.items()]


def encode_pseries(series: PSeries) -> Dict[str, Any]:
    """{"pwindow": [lo2, hi2 or null], "coeffs": [[e2, "num/den"], ...]}."""
    return {"pwindow": [series.lower, series.top], "coeffs": encode_terms(series)}


def decode_pseries(data: Dict[str, Any]) -> PSeries:
    low, top = data["pwindow"]
    return PSeries({int(e): _rational(c) for e, c in data["coeffs"]}, lower=low, top=top)


def encode_qseries(series: QSeries) -> Dict[str, Any]:
    """
    {"qorder": N, "pwindow": [lo2, hi2], "coeffs": [[d, [[e2, "num/den"], ...]], ...]}.

    The window is the lowest lower bound and the smallest top over all coefficients
    (null for exact series); zero coefficients are omitted and "qoffset" appears
    only when the symbolic offset is nonzero.
    """
    lows = [c.lower for c in series.coeffs]
    tops = [c.top for c in series.coeffs if c.top is not None]
    data: Dict[str, Any] = {
        "qorder": series.order,
        "pwindow": [min(lows), min(tops) if tops else None],
        "coeffs": [[d, encode_terms(c)] for d, c in enumerate(series.coeffs) if not c.is_zero()],
    }
    if series.q_offset:
        data["qoffset"] = str(series.q_offset)
    return data


def decode_qseries(data: Dict[str, Any]) -> QSeries:
    low, top = data["pwindow"]
    rows = {int(d): {int(e): _rational(c) for e, c in terms} for d, terms in data["coeffs"]}
    coeffs = [PSeries(rows.get(d, {}), lower=low, top=top) for d in range(data["qorder"] + 1)]
    return QSeries(coeffs, _rational(data.get("qoffset", "0")))


def encode_agraded(series: AGradedSeries) -> Dict[str, Any]:
    return {
        "radius": series.radius,
        "qorder": series.order,
        "terms": [[a, encode_qseries(series.coefficient(a))] for a in series.exponents()],
    }


def decode_agraded(data: Dict[str, Any]) -> AGradedSeries:
    terms = {int(a): decode_qseries(q) for a, q in data["terms"]}
    return AGradedSeries(terms, data["radius"], data["qorder"])


def encode_series(value: Any) -> Dict[str, Any]:
    """Tags a series with its kind so that `decode_series` can rebuild it."""
    if isinstance(value, AGradedSeries):
        return {"kind": "agraded", **encode_agraded(value)}
    if isinstance(value, QSeries):
        return {"kind": "qseries", **encode_qseries(value)}
    if isinstance(value, PSeries):
        return {"kind": "pseries", **encode_pseries(value)}
    raise TypeError(f"Cannot encode {type(value).__name__} as a series.")


def decode_series(data: Dict[str, Any]):
    kind = data.get("kind")
    if kind == "agraded":
        return decode_agraded(data)
    if kind == "qseries":
        return decode_qseries(data)
    if kind == "pseries":
        return decode_pseries(data)
    raise VertexError(f"Unknown series kind {kind!r}; expected one of {_SERIES_KINDS}.")


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


def encode_report(report: IdentityReport, version: Optional[str] = None) -> Dict[str, Any]:
    """The report schema {"check", "params", "status", "mismatches", "series"}; timings are left out."""
    params = _plain(report.params)
    if version is not None:
        params["version"] = version
    return {
        "check": report.check,
        "params": params,
        "status": report.status,
        "mismatches": [m.dict(exclude_none=True) for m in report.mismatches],
        "series": {name: encode_series(value) for name, value in report.series.items()},
    }


def decode_report(data: Dict[str, Any]) -> IdentityReport:
    """Rebuilds a report written by `encode_report`, so two runs can be diffed as objects."""
    return IdentityReport(
        check=data["check"],
        params=data.get("params", {}),
        mismatches=data.get("mismatches", []),
        series={name: decode_series(value) for name, value in data.get("series", {}).items()},
    )


def dumps(payload: Any) -> str:
    """Key-ordered, byte-stable JSON."""
    return json.dumps(payload, sort_keys=True, indent=2)


def loads(text: str) -> Any:
    return json.loads(text)
