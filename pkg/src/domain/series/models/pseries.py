from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from src.domain.series.models.window import HalfExp, Number, format_half
from src.utils.exceptions import NonInvertibleError, WindowError

Scalar = Union[int, Fraction]
Mismatch = Tuple[HalfExp, Fraction, Fraction]


def _min_top(a: Optional[HalfExp], b: Optional[HalfExp]) -> Optional[HalfExp]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PSeries:
    """
    Laurent series in p^(1/2) with exact rational coefficients.

    Coefficients are known exactly for every exponent up to `top`; `top is None`
    marks an exact Laurent polynomial. Every stored exponent lies in
    [lower, top] and no stored coefficient is zero. Instances are never
    mutated after construction.
    """

    __slots__ = ("_coeffs", "_lower", "_top")

    def __init__(self, coeffs: Mapping[HalfExp, Number], lower: Optional[HalfExp] = None,
                 top: Optional[HalfExp] = None):
        cleaned: Dict[HalfExp, Fraction] = {}
        for e, c in coeffs.items():
            if c and (top is None or e <= top):
                cleaned[e] = Fraction(c)
        if lower is None:
            lower = min(cleaned) if cleaned else (top if top is not None else 0)
        elif cleaned and min(cleaned) < lower:
            raise WindowError(
                f"Coefficient at p^{format_half(min(cleaned))} lies below the declared lower bound "
                f"p^{format_half(lower)}."
            )
        if top is not None and top < lower:
            raise WindowError(
                f"Window underflow: top p^{format_half(top)} is below lower bound p^{format_half(lower)}."
            )
        self._coeffs = cleaned
        self._lower = lower
        self._top = top

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, top: Optional[HalfExp] = None) -> "PSeries":
        return cls({}, lower=top if top is not None else 0, top=top)

    @classmethod
    def one(cls) -> "PSeries":
        return cls({0: 1})

    @classmethod
    def monomial(cls, twice: HalfExp, coefficient: Scalar = 1) -> "PSeries":
        return cls({twice: coefficient})

    @classmethod
    def polynomial(cls, terms: Iterable[Tuple[HalfExp, Scalar]]) -> "PSeries":
        coeffs: Dict[HalfExp, Fraction] = {}
        for e, c in terms:
            coeffs[e] = coeffs.get(e, Fraction(0)) + c
        return cls(coeffs)

    # -- accessors ----------------------------------------------------

    @property
    def coeffs(self) -> Mapping[HalfExp, Fraction]:
        return self._coeffs

    @property
    def lower(self) -> HalfExp:
        return self._lower

    @property
    def top(self) -> Optional[HalfExp]:
        return self._top

    @property
    def is_exact(self) -> bool:
        return self._top is None

    def is_zero(self) -> bool:
        return not self._coeffs

    def valuation(self) -> Optional[HalfExp]:
        return min(self._coeffs) if self._coeffs else None

    def degree(self) -> Optional[HalfExp]:
        return max(self._coeffs) if self._coeffs else None

    def coefficient(self, twice: HalfExp) -> Fraction:
        if self._top is not None and twice > self._top:
            raise WindowError(
                f"p^{format_half(twice)} lies above the window top p^{format_half(self._top)}."
            )
        return self._coeffs.get(twice, Fraction(0))

    def items(self) -> List[Tuple[HalfExp, Fraction]]:
        return sorted(self._coeffs.items())

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs.values())

    # -- ring operations ----------------------------------------------

    def __neg__(self) -> "PSeries":
        return PSeries({e: -c for e, c in self._coeffs.items()}, self._lower, self._top)

    def __add__(self, other: "PSeries") -> "PSeries":
        if not isinstance(other, PSeries):
            return NotImplemented
        top = _min_top(self._top, other._top)
        coeffs = dict(self._coeffs)
        for e, c in other._coeffs.items():
            coeffs[e] = coeffs.get(e, Fraction(0)) + c
        return PSeries(coeffs, min(self._lower, other._lower) if top is None
                       else min(self._lower, other._lower, top), top)

    def __sub__(self, other: "PSeries") -> "PSeries":
        if not isinstance(other, PSeries):
            return NotImplemented
        return self + (-other)

    def _precision_base(self) -> HalfExp:
        v = self.valuation()
        return self._lower if v is None else v

    def __mul__(self, other: Union["PSeries", Scalar]) -> "PSeries":
        if isinstance(other, (int, Fraction)):
            if not other:
                return PSeries({}, self._lower, self._top)
            return PSeries({e: c * other for e, c in self._coeffs.items()}, self._lower, self._top)
        if not isinstance(other, PSeries):
            return NotImplemented
        top = None
        if self._top is not None:
            top = self._top + other._precision_base()
        if other._top is not None:
            top = _min_top(top, other._top + self._precision_base())
        lower = self._lower + other._lower
        if top is not None and top < lower:
            raise WindowError(
                f"Window underflow in product: top p^{format_half(top)} below lower p^{format_half(lower)}."
            )
        coeffs: Dict[HalfExp, Fraction] = {}
        right = sorted(other._coeffs.items())
        for ea, ca in self._coeffs.items():
            for eb, cb in right:
                e = ea + eb
                if top is not None and e > top:
                    break
                coeffs[e] = coeffs.get(e, Fraction(0)) + ca * cb
        return PSeries(coeffs, lower, top)

    __rmul__ = __mul__

    def power(self, k: int, top: Optional[HalfExp] = None) -> "PSeries":
        if k < 0:
            return self.invert(top).power(-k)
        result = PSeries.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def invert(self, top: Optional[HalfExp] = None) -> "PSeries":
        """
        Multiplicative inverse in the ring of series bounded below.

        The result keeps the relative precision of the input. Inverting an
        exact polynomial with more than one term needs an explicit `top`.

        Raises:
            NonInvertibleError: If the series is zero on its window.
            WindowError: If an exact non-monomial is inverted without a top.
        """
        v = self.valuation()
        if v is None:
            raise NonInvertibleError("non-invertible", series=str(self))
        lead = self._coeffs[v]
        if self._top is None and len(self._coeffs) == 1:
            return PSeries({-v: 1 / lead})
        if self._top is not None:
            result_top = self._top - 2 * v
            top = result_top if top is None else min(top, result_top)
        elif top is None:
            raise WindowError("Inverting an exact polynomial requires a window top.")
        span = top + v
        if span < 0:
            return PSeries({}, top, top)
        tail = [(e - v, c / lead) for e, c in sorted(self._coeffs.items()) if e != v]
        u: List[Fraction] = [Fraction(0)] * (span + 1)
        u[0] = Fraction(1)
        for d in range(1, span + 1):
            acc = Fraction(0)
            for k, t in tail:
                if k > d:
                    break
                if u[d - k]:
                    acc += t * u[d - k]
            u[d] = -acc
        inv_lead = 1 / lead
        return PSeries({d - v: c * inv_lead for d, c in enumerate(u) if c}, -v, top)

    # -- transformations ----------------------------------------------

    def shift(self, twice: HalfExp) -> "PSeries":
        """Multiplies by p^(twice/2); exact and lossless."""
        return PSeries({e + twice: c for e, c in self._coeffs.items()}, self._lower + twice,
                       None if self._top is None else self._top + twice)

    def truncate(self, top: HalfExp) -> "PSeries":
        """
        Restricts the declared-valid range to exponents <= top.

        Raises:
            WindowError: If the series is not known up to `top`.
        """
        if self._top is not None and self._top < top:
            raise WindowError(
                f"Series is only valid up to p^{format_half(self._top)}, requested p^{format_half(top)}."
            )
        if self._top is None:
            d = self.degree()
            if d is None or d <= top:
                return self
        return PSeries({e: c for e, c in self._coeffs.items() if e <= top}, min(self._lower, top), top)

    def substitute_inverse(self) -> "PSeries":
        """p -> p^-1; only defined for exact polynomials."""
        if self._top is not None:
            raise WindowError("p -> 1/p needs an exact polynomial, the series is truncated.")
        return PSeries({-e: c for e, c in self._coeffs.items()})

    def euler_derivative(self) -> "PSeries":
        """Applies p d/dp, which scales p^e by e."""
        return PSeries({e: c * Fraction(e, 2) for e, c in self._coeffs.items()}, self._lower, self._top)

    # -- comparison ---------------------------------------------------

    def mismatches(self, other: "PSeries", top: Optional[HalfExp] = None) -> List[Mismatch]:
        """
        Lists every exponent where the two series differ, on the intersection of
        their windows (optionally cut at `top`).
        """
        limit = _min_top(_min_top(self._top, other._top), top)
        keys = set(self._coeffs) | set(other._coeffs)
        out = []
        for e in sorted(keys):
            if limit is not None and e > limit:
                break
            a = self._coeffs.get(e, Fraction(0))
            b = other._coeffs.get(e, Fraction(0))
            if a != b:
                out.append((e, a, b))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PSeries):
            return NotImplemented
        return not self.mismatches(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"PSeries({self})"

    def __str__(self) -> str:
        if not self._coeffs:
            body = "0"
        else:
            body = " + ".join(f"({c})*p^{format_half(e)}" for e, c in self.items())
        if self._top is not None:
            body += f" + O(p^{format_half(self._top + 1)})"
        return body
