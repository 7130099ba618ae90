from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from src.domain.series.models.pseries import PSeries, Scalar
from src.domain.series.models.window import HalfExp, format_half
from src.utils.exceptions import NonInvertibleError

Denominator = Tuple[Tuple[int, int], ...]


def one_minus(i: int) -> PSeries:
    """The exact polynomial 1 - p^i (i in p units)."""
    return PSeries({0: 1, 2 * i: -1})


def _denominator_poly(factors: Mapping[int, int]) -> PSeries:
    poly = PSeries.one()
    for i, m in sorted(factors.items()):
        for _ in range(m):
            poly = poly * one_minus(i)
    return poly


def divide_one_minus(poly: PSeries, i: int) -> Optional[PSeries]:
    """Exact division of a Laurent polynomial by 1 - p^i, or None if it does not divide."""
    if poly.is_zero():
        return poly
    step = 2 * i
    low, high = poly.valuation(), poly.degree()
    if high - low < step:
        return None
    quotient: Dict[HalfExp, Fraction] = {}
    for e in range(low, high - step + 1):
        c = poly.coeffs.get(e, Fraction(0)) + quotient.get(e - step, Fraction(0))
        if c:
            quotient[e] = c
    candidate = PSeries(quotient)
    if (candidate * one_minus(i) - poly).is_zero():
        return candidate
    return None


class RationalLaurent:
    """
    An exact rational function: a Laurent polynomial in p^(1/2) over a product
    of factors (1 - p^i), i > 0.

    Equality is decided by cross-multiplication; the only expansion is the
    ascending one, 1/(1 - p^i) = sum_k p^(ik).
    """

    __slots__ = ("_numerator", "_denominator")

    def __init__(self, numerator: PSeries, denominator: Optional[Mapping[int, int]] = None):
        if not numerator.is_exact:
            raise ValueError("RationalLaurent numerators must be exact polynomials.")
        den: Dict[int, int] = {}
        for i, m in (denominator or {}).items():
            if i <= 0:
                raise ValueError(f"Denominator factor 1 - p^{i} must have i > 0.")
            if m < 0:
                raise ValueError("Denominator multiplicities must be nonnegative.")
            if m:
                den[i] = den.get(i, 0) + m
        self._numerator = numerator
        self._denominator: Denominator = tuple(sorted(den.items())) if not numerator.is_zero() else ()

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalLaurent":
        return cls(PSeries.zero())

    @classmethod
    def one(cls) -> "RationalLaurent":
        return cls(PSeries.one())

    @classmethod
    def constant(cls, c: Scalar) -> "RationalLaurent":
        return cls(PSeries({0: c}))

    @classmethod
    def monomial(cls, twice: HalfExp, coefficient: Scalar = 1) -> "RationalLaurent":
        return cls(PSeries.monomial(twice, coefficient))

    @classmethod
    def from_factors(cls, numerator: PSeries, factors: Iterable[int]) -> "RationalLaurent":
        """
        Builds numerator / prod(1 - p^i) where i may be negative; negative factors are
        rewritten with positive ones via 1/(1 - p^-j) = -p^j / (1 - p^j).
        """
        den: Dict[int, int] = {}
        for i in factors:
            if i == 0:
                raise NonInvertibleError("non-invertible", factor="1 - p^0")
            if i < 0:
                numerator = numerator * PSeries.monomial(-2 * i, -1)
                i = -i
            den[i] = den.get(i, 0) + 1
        return cls(numerator, den)

    @classmethod
    def ascending_tail(cls, start: HalfExp) -> "RationalLaurent":
        """sum_{j>=0} p^(start/2 + j) = p^(start/2) / (1 - p)."""
        return cls(PSeries.monomial(start), {1: 1})

    @classmethod
    def descending_tail(cls, start: HalfExp) -> "RationalLaurent":
        """sum_{j>=0} p^(start/2 - j), held as its rational form -p^(start/2 + 1) / (1 - p)."""
        return cls(PSeries.monomial(start + 2, -1), {1: 1})

    # -- accessors ----------------------------------------------------

    @property
    def numerator(self) -> PSeries:
        return self._numerator

    @property
    def denominator(self) -> Denominator:
        return self._denominator

    def is_zero(self) -> bool:
        return self._numerator.is_zero()

    def is_polynomial(self) -> bool:
        return not self._denominator

    # -- arithmetic ---------------------------------------------------

    def _lifted(self, target: Mapping[int, int]) -> PSeries:
        mine = dict(self._denominator)
        missing = {i: m - mine.get(i, 0) for i, m in target.items() if m > mine.get(i, 0)}
        return self._numerator * _denominator_poly(missing)

    @staticmethod
    def _common(a: "RationalLaurent", b: "RationalLaurent") -> Dict[int, int]:
        common = dict(a._denominator)
        for i, m in b._denominator:
            common[i] = max(common.get(i, 0), m)
        return common

    def __add__(self, other: Union["RationalLaurent", Scalar]) -> "RationalLaurent":
        if isinstance(other, (int, Fraction)):
            other = RationalLaurent.constant(other)
        if not isinstance(other, RationalLaurent):
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        common = self._common(self, other)
        return RationalLaurent(self._lifted(common) + other._lifted(common), common)

    __radd__ = __add__

    def __neg__(self) -> "RationalLaurent":
        return RationalLaurent(-self._numerator, dict(self._denominator))

    def __sub__(self, other: Union["RationalLaurent", Scalar]) -> "RationalLaurent":
        if isinstance(other, (int, Fraction)):
            other = RationalLaurent.constant(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "RationalLaurent":
        return RationalLaurent.constant(other) - self

    def __mul__(self, other: Union["RationalLaurent", PSeries, Scalar]) -> "RationalLaurent":
        if isinstance(other, (int, Fraction)):
            return RationalLaurent(self._numerator * other, dict(self._denominator))
        if isinstance(other, PSeries):
            other = RationalLaurent(other)
        if not isinstance(other, RationalLaurent):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalLaurent.zero()
        den = dict(self._denominator)
        for i, m in other._denominator:
            den[i] = den.get(i, 0) + m
        return RationalLaurent(self._numerator * other._numerator, den)

    __rmul__ = __mul__

    def shift(self, twice: HalfExp) -> "RationalLaurent":
        return RationalLaurent(self._numerator.shift(twice), dict(self._denominator))

    def power(self, k: int) -> "RationalLaurent":
        if k < 0:
            return self.inverse().power(-k)
        result = RationalLaurent.one()
        for _ in range(k):
            result = result * self
        return result

    def inverse(self) -> "RationalLaurent":
        """
        Inverts a value whose numerator is c * p^v * prod(1 - p^i)^k.

        Raises:
            NonInvertibleError: If the numerator is zero or not of that shape.
        """
        if self.is_zero():
            raise NonInvertibleError("non-invertible")
        v = self._numerator.valuation()
        lead = self._numerator.coeffs[v]
        rest = self._numerator.shift(-v) * (1 / lead)
        found: Dict[int, int] = {}
        i = 1
        while rest.degree() > 0:
            if 2 * i > rest.degree():
                raise NonInvertibleError("non-invertible", numerator=str(self._numerator))
            q = divide_one_minus(rest, i)
            if q is None:
                i += 1
                continue
            rest = q
            found[i] = found.get(i, 0) + 1
        if rest.coeffs.get(0) != 1:
            raise NonInvertibleError("non-invertible", numerator=str(self._numerator))
        numerator = _denominator_poly(dict(self._denominator)).shift(-v) * (1 / lead)
        return RationalLaurent(numerator, found)

    def reduce(self) -> "RationalLaurent":
        """Cancels every denominator factor that divides the numerator."""
        num = self._numerator
        den = dict(self._denominator)
        for i in sorted(den, reverse=True):
            while den[i]:
                q = divide_one_minus(num, i)
                if q is None:
                    break
                num = q
                den[i] -= 1
        return RationalLaurent(num, den)

    def substitute_inverse(self) -> "RationalLaurent":
        """p -> p^-1, rewritten back over positive factors."""
        num = self._numerator.substitute_inverse()
        for i, m in self._denominator:
            num = num * PSeries.monomial(2 * i * m, (-1) ** m)
        return RationalLaurent(num, dict(self._denominator))

    def euler_derivative(self) -> "RationalLaurent":
        """p d/dp, using p d/dp (1 - p^i)^-m = m i p^i (1 - p^i)^(-m-1)."""
        den = dict(self._denominator)
        result = RationalLaurent(self._numerator.euler_derivative(), den)
        for i, m in self._denominator:
            bumped = dict(den)
            bumped[i] += 1
            result = result + RationalLaurent(self._numerator * PSeries.monomial(2 * i, m * i), bumped)
        return result

    # -- comparison and expansion -------------------------------------

    def equals(self, other: "RationalLaurent") -> bool:
        common = self._common(self, other)
        return (self._lifted(common) - other._lifted(common)).is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalLaurent.constant(other)
        if not isinstance(other, RationalLaurent):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def expand(self, top: HalfExp) -> PSeries:
        """Ascending expansion, exact for every exponent <= top."""
        if not self._denominator:
            return self._numerator.truncate(top)
        v = self._numerator.valuation()
        if v is None or top < v:
            return PSeries({}, top, top)
        dense = [Fraction(0)] * (top - v + 1)
        for e, c in self._numerator.coeffs.items():
            if e <= top:
                dense[e - v] = c
        n = len(dense)
        for i, m in self._denominator:
            step = 2 * i
            for _ in range(m):
                for idx in range(step, n):
                    if dense[idx - step]:
                        dense[idx] += dense[idx - step]
        return PSeries({v + idx: c for idx, c in enumerate(dense) if c}, v, top)

    def __repr__(self) -> str:
        return f"RationalLaurent({self})"

    def __str__(self) -> str:
        if not self._denominator:
            return f"({self._numerator})"
        den = "*".join(
            f"(1-p^{i})" + (f"^{m}" if m > 1 else "") for i, m in self._denominator
        )
        return f"({self._numerator})/({den})"


def half_power_difference() -> RationalLaurent:
    """p^(1/2) - p^(-1/2)."""
    return RationalLaurent(PSeries({1: 1, -1: -1}))


def format_rational_exponent(twice: HalfExp) -> str:
    return format_half(twice)
