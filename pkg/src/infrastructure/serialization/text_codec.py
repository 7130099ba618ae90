from typing import Any, List, Optional

from src.domain.identities.models.report import IdentityReport


def _line(key: str, value: Any) -> str:
    return f"{key}: {value}"


def render_text(report: IdentityReport, version: Optional[str] = None) -> str:
    """
    Line-stable text form of a report: header, sorted params, one line per
    mismatch, one line per series. Timings are not rendered.
    """
    lines: List[str] = [_line("check", report.check), _line("status", report.status)]
    params = dict(report.params)
    if version is not None:
        params["version"] = version
    for key in sorted(params):
        lines.append(_line(f"  {key}", params[key]))
    lines.append(_line("mismatches", len(report.mismatches)))
    for m in report.mismatches:
        where = " ".join(f"{k}={v}" for k, v in m.dict(exclude_none=True).items() if k not in ("lhs", "rhs"))
        lines.append(f"  {where}: lhs={m.lhs} rhs={m.rhs}")
    for name in sorted(report.series):
        lines.append(_line(f"series {name}", report.series[name]))
    return "\n".join(lines) + "\n"
