from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from src.domain.fock.models.coefficient import FormalCoefficient, Monomial
from src.domain.fock.models.maya_state import MayaState
from src.domain.partitions.models.partition import Partition
from src.domain.series.models.pseries import PSeries, Scalar
from src.domain.series.models.rational_laurent import RationalLaurent

Factor = Union[FormalCoefficient, RationalLaurent, PSeries, Scalar]


class FockVector:
    """
    A finite linear combination of Maya states with FormalCoefficient coefficients.

    The basis is orthonormal, so the inner product is the sum of coefficient
    products over common states.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[MayaState, FormalCoefficient]] = None):
        self._terms: Dict[MayaState, FormalCoefficient] = {
            s: c for s, c in (terms or {}).items() if not c.is_zero()
        }

    @classmethod
    def zero(cls) -> "FockVector":
        return cls()

    @classmethod
    def basis(cls, state: MayaState, coefficient: Optional[FormalCoefficient] = None) -> "FockVector":
        return cls({state: coefficient if coefficient is not None else FormalCoefficient.one()})

    @classmethod
    def from_partition(cls, lam: Partition) -> "FockVector":
        return cls.basis(MayaState.from_partition(lam))

    @classmethod
    def vacuum(cls) -> "FockVector":
        return cls.basis(MayaState.vacuum())

    def states(self) -> List[MayaState]:
        return sorted(self._terms, key=MayaState.sort_key)

    def items(self) -> List[Tuple[MayaState, FormalCoefficient]]:
        return [(s, self._terms[s]) for s in self.states()]

    def coefficient(self, state: MayaState) -> FormalCoefficient:
        return self._terms.get(state, FormalCoefficient.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def max_energy(self) -> Optional[Fraction]:
        return max((s.energy for s in self._terms), default=None)

    def min_energy(self) -> Optional[Fraction]:
        return min((s.energy for s in self._terms), default=None)

    # -- linear structure ---------------------------------------------

    def __add__(self, other: "FockVector") -> "FockVector":
        if not isinstance(other, FockVector):
            return NotImplemented
        terms = dict(self._terms)
        for s, c in other._terms.items():
            terms[s] = terms[s] + c if s in terms else c
        return FockVector(terms)

    def __neg__(self) -> "FockVector":
        return FockVector({s: -c for s, c in self._terms.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def scaled(self, factor: Factor) -> "FockVector":
        return FockVector({s: c * factor for s, c in self._terms.items()})

    def map_coefficients(self, fn: Callable[[MayaState, FormalCoefficient], FormalCoefficient]) -> "FockVector":
        return FockVector({s: fn(s, c) for s, c in self._terms.items()})

    def times_monomial(self, monomial: Monomial) -> "FockVector":
        return FockVector({s: c.times_monomial(monomial) for s, c in self._terms.items()})

    def truncate_energy(self, max_energy: int) -> "FockVector":
        return FockVector({s: c for s, c in self._terms.items() if s.energy <= max_energy})

    def truncate_q(self, order: Optional[int]) -> "FockVector":
        if order is None:
            return self
        return FockVector({s: c.truncate_q(order) for s, c in self._terms.items()})

    def inner(self, other: "FockVector") -> FormalCoefficient:
        total = FormalCoefficient.zero()
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        for s, c in small._terms.items():
            if s in large._terms:
                total = total + c * large._terms[s]
        return total

    def equals(self, other: "FockVector") -> bool:
        states = set(self._terms) | set(other._terms)
        return all(self.coefficient(s) == other.coefficient(s) for s in states)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"FockVector({len(self._terms)} terms)"


def linear_combination(pairs: Iterable[Tuple[FormalCoefficient, FockVector]]) -> FockVector:
    total = FockVector.zero()
    for c, v in pairs:
        total = total + v.scaled(c)
    return total
