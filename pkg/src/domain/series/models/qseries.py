from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from src.domain.series.models.pseries import PSeries, Scalar
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import HalfExp, Window, format_half
from src.utils.exceptions import OrderMismatchError, WindowError

QMismatch = Tuple[int, HalfExp, Fraction, Fraction]


class QSeries:
    """
    Power series in q truncated at order N whose coefficients are PSeries.

    `q_offset` is a rational exponent carried symbolically in front of the
    series (eta's q^(1/24)); it is added by products and negated by inversion
    but never expanded.
    """

    __slots__ = ("_coeffs", "_offset")

    def __init__(self, coeffs: Sequence[PSeries], q_offset: Union[int, Fraction] = 0):
        if not coeffs:
            raise ValueError("A QSeries needs at least the q^0 coefficient.")
        self._coeffs: Tuple[PSeries, ...] = tuple(coeffs)
        self._offset = Fraction(q_offset)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls([PSeries.zero()] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls.constant(PSeries.one(), order)

    @classmethod
    def constant(cls, value: PSeries, order: int) -> "QSeries":
        return cls([value] + [PSeries.zero()] * order)

    @classmethod
    def from_terms(cls, order: int, terms: Mapping[int, PSeries]) -> "QSeries":
        return cls([terms.get(d, PSeries.zero()) for d in range(order + 1)])

    @classmethod
    def from_rational(cls, order: int, terms: Mapping[int, RationalLaurent], top: HalfExp) -> "QSeries":
        """Expands each q-coefficient, given in rational form, ascending up to p^(top/2)."""
        return cls([terms[d].expand(top) if d in terms else PSeries.zero() for d in range(order + 1)])

    # -- accessors ----------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> Tuple[PSeries, ...]:
        return self._coeffs

    @property
    def q_offset(self) -> Fraction:
        return self._offset

    def coefficient(self, d: int) -> PSeries:
        return self._coeffs[d]

    def top(self) -> Optional[HalfExp]:
        """The smallest window top over all coefficients (None if all are exact)."""
        tops = [c.top for c in self._coeffs if c.top is not None]
        return min(tops) if tops else None

    def valuation(self) -> Optional[HalfExp]:
        values = [c.valuation() for c in self._coeffs if not c.is_zero()]
        return min(values) if values else None

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self._coeffs)

    # -- ring operations ----------------------------------------------

    def _check_compatible(self, other: "QSeries", what: str):
        if self.order != other.order:
            raise OrderMismatchError(
                f"Cannot {what} q-series of orders {self.order} and {other.order}.",
                left=self.order, right=other.order,
            )

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        self._check_compatible(other, "add")
        if self._offset != other._offset:
            raise OrderMismatchError(
                f"Cannot add q-series with offsets q^{self._offset} and q^{other._offset}."
            )
        return QSeries([a + b for a, b in zip(self._coeffs, other._coeffs)], self._offset)

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self._coeffs], self._offset)

    def __sub__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["QSeries", PSeries, Scalar]) -> "QSeries":
        if isinstance(other, (PSeries, int, Fraction)):
            return QSeries([c * other for c in self._coeffs], self._offset)
        if not isinstance(other, QSeries):
            return NotImplemented
        self._check_compatible(other, "multiply")
        n = self.order
        out: List[PSeries] = []
        for d in range(n + 1):
            acc: Optional[PSeries] = None
            for i in range(d + 1):
                a, b = self._coeffs[i], other._coeffs[d - i]
                if a.is_zero() and a.is_exact or b.is_zero() and b.is_exact:
                    continue
                term = a * b
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else PSeries.zero())
        return QSeries(out, self._offset + other._offset)

    __rmul__ = __mul__

    def invert(self, top: Optional[HalfExp] = None) -> "QSeries":
        """
        Newton-style inversion, coefficient by coefficient.

        Args:
            top: Window top for inverting the q^0 coefficient when it is an exact polynomial.

        Raises:
            NonInvertibleError: If the q^0 coefficient is zero.
        """
        b0 = self._coeffs[0].invert(top)
        out = [b0]
        for d in range(1, self.order + 1):
            acc: Optional[PSeries] = None
            for i in range(1, d + 1):
                a = self._coeffs[i]
                if a.is_zero() and a.is_exact:
                    continue
                term = a * out[d - i]
                acc = term if acc is None else acc + term
            out.append(PSeries.zero() if acc is None else -(b0 * acc))
        return QSeries(out, -self._offset)

    def power(self, k: int, top: Optional[HalfExp] = None) -> "QSeries":
        if k < 0:
            return self.invert(top).power(-k)
        result = QSeries.one(self.order)
        for _ in range(k):
            result = result * self
        return result

    # -- transformations ----------------------------------------------

    def substitute_q(self, k: int) -> "QSeries":
        """q -> q^k, keeping the same order."""
        if k < 1:
            raise ValueError("q can only be replaced by a positive power of itself.")
        terms = {d * k: c for d, c in enumerate(self._coeffs) if d * k <= self.order}
        return QSeries([terms.get(d, PSeries.zero()) for d in range(self.order + 1)], self._offset * k)

    def euler_derivative_p(self) -> "QSeries":
        return QSeries([c.euler_derivative() for c in self._coeffs], self._offset)

    def substitute_inverse_p(self) -> "QSeries":
        return QSeries([c.substitute_inverse() for c in self._coeffs], self._offset)

    def shift_p(self, twice: HalfExp) -> "QSeries":
        return QSeries([c.shift(twice) for c in self._coeffs], self._offset)

    def shift_q(self, k: int) -> "QSeries":
        """Multiplies by q^k (k >= 0), dropping what passes the order."""
        if k < 0:
            raise ValueError("Only nonnegative q shifts keep a power series.")
        head = [PSeries.zero()] * min(k, self.order + 1)
        return QSeries((head + list(self._coeffs))[: self.order + 1], self._offset)

    def with_offset(self, q_offset: Union[int, Fraction]) -> "QSeries":
        return QSeries(self._coeffs, q_offset)

    def truncate(self, top: HalfExp) -> "QSeries":
        return QSeries([c.truncate(top) for c in self._coeffs], self._offset)

    def truncate_order(self, order: int) -> "QSeries":
        if order > self.order:
            raise OrderMismatchError(f"Cannot raise the q-order from {self.order} to {order}.")
        return QSeries(self._coeffs[: order + 1], self._offset)

    def restrict(self, window: Window) -> "QSeries":
        """
        Cuts every coefficient at the window top.

        Raises:
            WindowError: If a coefficient is not known up to the top or reaches below the floor.
        """
        out = self.truncate(window.high)
        low = out.valuation()
        if low is not None and low < window.low:
            raise WindowError(
                f"window too small: a coefficient reaches p^{format_half(low)}, "
                f"below the floor p^{format_half(window.low)}."
            )
        return out

    # -- comparison ---------------------------------------------------

    def mismatches(self, other: "QSeries", top: Optional[HalfExp] = None) -> List[QMismatch]:
        self._check_compatible(other, "compare")
        if self._offset != other._offset:
            raise OrderMismatchError(
                f"Cannot compare q-series with offsets q^{self._offset} and q^{other._offset}."
            )
        out: List[QMismatch] = []
        for d, (a, b) in enumerate(zip(self._coeffs, other._coeffs)):
            out.extend((d, e, x, y) for e, x, y in a.mismatches(b, top))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return not self.mismatches(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"QSeries(order={self.order}, offset={self._offset})"

    def __str__(self) -> str:
        prefix = f"q^({self._offset}) * " if self._offset else ""
        return prefix + " + ".join(f"[{c}]*q^{d}" for d, c in enumerate(self._coeffs) if not c.is_zero())


def qseries_from_dict(order: int, table: Dict[int, Dict[HalfExp, Scalar]], top: Optional[HalfExp]) -> QSeries:
    """Builds a QSeries from nested {d: {twice_exp: coeff}} data, all cut at `top`."""
    return QSeries([PSeries(table.get(d, {}), top=top) for d in range(order + 1)])
