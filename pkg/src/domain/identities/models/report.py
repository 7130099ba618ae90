from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional

from pydantic import BaseModel, Field, root_validator

from src.domain.series.models.window import HalfExp, format_half

PASS = "PASS"
FAIL = "FAIL"


def _text(value: Any) -> str:
    return str(Fraction(value)) if isinstance(value, (int, Fraction)) else str(value)


class Mismatch(BaseModel):
    """One coefficient where the two sides of a check disagree."""

    check: Optional[str] = None
    entry: Optional[str] = None
    q: Optional[int] = None
    a: Optional[int] = None
    u: Optional[int] = None
    p: Optional[str] = None
    lhs: str
    rhs: str

    @classmethod
    def at(cls, lhs: Any, rhs: Any, check: Optional[str] = None, entry: Optional[str] = None,
           q: Optional[int] = None, a: Optional[int] = None, u: Optional[int] = None,
           p: Optional[HalfExp] = None) -> "Mismatch":
        return cls(
            check=check, entry=entry, q=q, a=a, u=u,
            p=format_half(p) if p is not None else None,
            lhs=_text(lhs), rhs=_text(rhs),
        )


class IdentityReport(BaseModel):
    """
    Result of one verification. `status` is derived: PASS exactly when no mismatch was found.

    `series` holds the computed sides (QSeries / PSeries / AGradedSeries objects) for the
    CLI codec; `timings` are logged but never serialized.
    """

    check: str
    params: Dict[str, Any] = Field(default_factory=dict)
    status: str = PASS
    mismatches: List[Mismatch] = Field(default_factory=list)
    series: Dict[str, Any] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)

    class Config:
        arbitrary_types_allowed = True

    @root_validator(skip_on_failure=True)
    def derive_status(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        values["status"] = FAIL if values.get("mismatches") else PASS
        return values

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def merged(self, others: Iterable["IdentityReport"], check: Optional[str] = None) -> "IdentityReport":
        """Folds sub-checks into one report, tagging their mismatches with the sub-check name."""
        mismatches = list(self.mismatches)
        series = dict(self.series)
        timings = dict(self.timings)
        for other in others:
            mismatches += [m.copy(update={"check": m.check or other.check}) for m in other.mismatches]
            series.update({f"{other.check}.{k}": v for k, v in other.series.items()})
            timings.update({f"{other.check}.{k}": v for k, v in other.timings.items()})
        return IdentityReport(check=check or self.check, params=self.params, mismatches=mismatches,
                              series=series, timings=timings)


def series_mismatches(rows: Iterable[tuple], check: Optional[str] = None) -> List[Mismatch]:
    """Converts (q, p, lhs, rhs) tuples from QSeries.mismatches."""
    return [Mismatch.at(x, y, check=check, q=d, p=e) for d, e, x, y in rows]


def graded_mismatches(rows: Iterable[tuple], check: Optional[str] = None) -> List[Mismatch]:
    """Converts (a, q, p, lhs, rhs) tuples from AGradedSeries.mismatches."""
    return [Mismatch.at(x, y, check=check, a=a, q=d, p=e) for a, d, e, x, y in rows]


def power_mismatches(rows: Iterable[tuple], check: Optional[str] = None,
                     entry: Optional[str] = None) -> List[Mismatch]:
    """Converts (p, lhs, rhs) tuples from PSeries.mismatches."""
    return [Mismatch.at(x, y, check=check, entry=entry, p=e) for e, x, y in rows]
