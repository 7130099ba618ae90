from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from src.domain.series.models.pseries import PSeries, Scalar
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import HalfExp

# Exponents of the formal parameters (a, u, q).
Monomial = Tuple[int, int, int]

ONE: Monomial = (0, 0, 0)

# (monomial, doubled p exponent, lhs coefficient, rhs coefficient)
CoefficientMismatch = Tuple[Monomial, HalfExp, Fraction, Fraction]


class FormalCoefficient:
    """
    The scalars of the Fock space: finite sums of a^i u^j q^k times RationalLaurent values in p.

    `a` is the grading parameter of E(a, p); `u` and `q` scale vertex operator arguments.
    Zero values are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, RationalLaurent]] = None):
        self._terms: Dict[Monomial, RationalLaurent] = {
            m: v for m, v in (terms or {}).items() if not v.is_zero()
        }

    @classmethod
    def zero(cls) -> "FormalCoefficient":
        return cls()

    @classmethod
    def one(cls) -> "FormalCoefficient":
        return cls({ONE: RationalLaurent.one()})

    @classmethod
    def scalar(cls, value: Union[RationalLaurent, PSeries, Scalar]) -> "FormalCoefficient":
        return cls.monomial(ONE, value)

    @classmethod
    def monomial(cls, monomial: Monomial, value: Union[RationalLaurent, PSeries, Scalar] = 1) -> "FormalCoefficient":
        if isinstance(value, PSeries):
            value = RationalLaurent(value)
        elif not isinstance(value, RationalLaurent):
            value = RationalLaurent.constant(value)
        return cls({monomial: value})

    def items(self) -> List[Tuple[Monomial, RationalLaurent]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self._terms))

    def get(self, monomial: Monomial) -> RationalLaurent:
        return self._terms.get(monomial, RationalLaurent.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "FormalCoefficient") -> "FormalCoefficient":
        if not isinstance(other, FormalCoefficient):
            return NotImplemented
        terms = dict(self._terms)
        for m, v in other._terms.items():
            terms[m] = terms[m] + v if m in terms else v
        return FormalCoefficient(terms)

    def __neg__(self) -> "FormalCoefficient":
        return FormalCoefficient({m: -v for m, v in self._terms.items()})

    def __sub__(self, other: "FormalCoefficient") -> "FormalCoefficient":
        return self + (-other)

    def __mul__(self, other: Union["FormalCoefficient", RationalLaurent, PSeries, Scalar]) -> "FormalCoefficient":
        if isinstance(other, (RationalLaurent, PSeries, int, Fraction)):
            return FormalCoefficient({m: v * other for m, v in self._terms.items()})
        if not isinstance(other, FormalCoefficient):
            return NotImplemented
        terms: Dict[Monomial, RationalLaurent] = {}
        for (a1, u1, q1), v in self._terms.items():
            for (a2, u2, q2), w in other._terms.items():
                m = (a1 + a2, u1 + u2, q1 + q2)
                product = v * w
                terms[m] = terms[m] + product if m in terms else product
        return FormalCoefficient(terms)

    __rmul__ = __mul__

    def times_monomial(self, monomial: Monomial) -> "FormalCoefficient":
        da, du, dq = monomial
        return FormalCoefficient({(a + da, u + du, q + dq): v for (a, u, q), v in self._terms.items()})

    def truncate_q(self, order: Optional[int]) -> "FormalCoefficient":
        """Drops every term of q-degree above the order."""
        if order is None:
            return self
        return FormalCoefficient({m: v for m, v in self._terms.items() if m[2] <= order})

    def restrict_a(self, low: int, high: int) -> "FormalCoefficient":
        return FormalCoefficient({m: v for m, v in self._terms.items() if low <= m[0] <= high})

    def a_exponents(self) -> List[int]:
        return sorted({m[0] for m in self._terms})

    def equals(self, other: "FormalCoefficient") -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(self.get(m) == other.get(m) for m in keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalCoefficient):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def mismatches(self, other: "FormalCoefficient", top: HalfExp) -> List[CoefficientMismatch]:
        """Monomials whose values differ, listed by their ascending expansions up to p^(top/2)."""
        out: List[CoefficientMismatch] = []
        for m in sorted(set(self._terms) | set(other._terms)):
            left, right = self.get(m), other.get(m)
            if left == right:
                continue
            diffs = left.expand(top).mismatches(right.expand(top))
            out.extend((m, e, x, y) for e, x, y in diffs)
        return out

    def __repr__(self) -> str:
        return f"FormalCoefficient({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, u, q), v in self.items():
            label = "".join(f"*{s}^{e}" for s, e in (("a", a), ("u", u), ("q", q)) if e)
            parts.append(f"{v}{label}")
        return " + ".join(parts)
