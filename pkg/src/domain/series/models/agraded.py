from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.window import HalfExp, Window
from src.utils.exceptions import AWindowError, OrderMismatchError

AMismatch = Tuple[int, int, HalfExp, Fraction, Fraction]


class AGradedSeries:
    """
    Laurent polynomial in the formal parameter a with QSeries coefficients,
    confined to the window [-radius, radius]. Absent exponents are zero.
    """

    __slots__ = ("_terms", "_radius", "_order")

    def __init__(self, terms: Mapping[int, QSeries], radius: int, order: int):
        cleaned: Dict[int, QSeries] = {}
        for a, series in terms.items():
            if series.order != order:
                raise OrderMismatchError(f"a^{a} coefficient has order {series.order}, expected {order}.")
            if abs(a) > radius:
                if any(not c.is_zero() for c in series.coeffs):
                    raise AWindowError(
                        f"a^{a} lies outside the a-window [-{radius}, {radius}].", exponent=a, radius=radius
                    )
                continue
            cleaned[a] = series
        self._terms = cleaned
        self._radius = radius
        self._order = order

    @classmethod
    def zero(cls, radius: int, order: int) -> "AGradedSeries":
        return cls({}, radius, order)

    @property
    def radius(self) -> int:
        return self._radius

    @property
    def order(self) -> int:
        return self._order

    def exponents(self) -> List[int]:
        return sorted(self._terms)

    def coefficient(self, a: int) -> QSeries:
        if abs(a) > self._radius:
            raise AWindowError(f"a^{a} lies outside the a-window [-{self._radius}, {self._radius}].")
        return self._terms.get(a, QSeries.zero(self._order))

    def _check(self, other: "AGradedSeries"):
        if self._radius != other._radius or self._order != other._order:
            raise OrderMismatchError(
                f"a-graded series differ in shape: R={self._radius}/{other._radius}, "
                f"N={self._order}/{other._order}."
            )

    def __add__(self, other: "AGradedSeries") -> "AGradedSeries":
        self._check(other)
        terms = dict(self._terms)
        for a, s in other._terms.items():
            terms[a] = terms[a] + s if a in terms else s
        return AGradedSeries(terms, self._radius, self._order)

    def __neg__(self) -> "AGradedSeries":
        return AGradedSeries({a: -s for a, s in self._terms.items()}, self._radius, self._order)

    def __sub__(self, other: "AGradedSeries") -> "AGradedSeries":
        return self + (-other)

    def __mul__(self, other: Union["AGradedSeries", QSeries, PSeries]) -> "AGradedSeries":
        if isinstance(other, (QSeries, PSeries)):
            return AGradedSeries({a: s * other for a, s in self._terms.items()}, self._radius, self._order)
        if not isinstance(other, AGradedSeries):
            return NotImplemented
        self._check(other)
        terms: Dict[int, QSeries] = {}
        for a, s in self._terms.items():
            for b, t in other._terms.items():
                product = s * t
                terms[a + b] = terms[a + b] + product if a + b in terms else product
        return AGradedSeries(terms, self._radius, self._order)

    def truncate(self, top: HalfExp) -> "AGradedSeries":
        return AGradedSeries({a: s.truncate(top) for a, s in self._terms.items()}, self._radius, self._order)

    def restrict(self, window: Window) -> "AGradedSeries":
        return AGradedSeries({a: s.restrict(window) for a, s in self._terms.items()}, self._radius, self._order)

    def mismatches(self, other: "AGradedSeries", exponents: Optional[range] = None,
                   top: Optional[HalfExp] = None) -> List[AMismatch]:
        """Coefficientwise comparison over the given a-exponents (default: the whole window)."""
        self._check(other)
        span = exponents if exponents is not None else range(-self._radius, self._radius + 1)
        out: List[AMismatch] = []
        for a in span:
            left, right = self.coefficient(a), other.coefficient(a)
            out.extend((a, d, e, x, y) for d, e, x, y in left.mismatches(right, top))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AGradedSeries):
            return NotImplemented
        return not self.mismatches(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"AGradedSeries(radius={self._radius}, order={self._order}, exponents={self.exponents()})"
