from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Optional, Tuple

from src.domain.partitions.models.partition import Partition
from src.domain.series.models.window import HalfExp, format_half
from src.utils.exceptions import ChargeError


@dataclass(frozen=True)
class MayaState:
    """
    A semi-infinite wedge basis vector, stored relative to the vacuum.

    Positions are half-integers kept doubled (1/2 -> 1). `particles` are the
    occupied positions > 0, `holes` the empty positions < 0; every other
    negative position is occupied and every other positive one is empty.
    """

    particles: FrozenSet[HalfExp] = field(default_factory=frozenset)
    holes: FrozenSet[HalfExp] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "particles", frozenset(self.particles))
        object.__setattr__(self, "holes", frozenset(self.holes))
        if any(k <= 0 or k % 2 == 0 for k in self.particles):
            raise ValueError(f"Particles must sit at positive half-integers: {sorted(self.particles)}")
        if any(k >= 0 or k % 2 == 0 for k in self.holes):
            raise ValueError(f"Holes must sit at negative half-integers: {sorted(self.holes)}")

    @classmethod
    def vacuum(cls) -> "MayaState":
        return cls()

    @classmethod
    def from_partition(cls, lam: Partition) -> "MayaState":
        """v_lambda = (lambda_1 - 1/2) ^ (lambda_2 - 3/2) ^ ..."""
        occupied = {2 * part - 2 * i + 1 for i, part in enumerate(lam.parts, start=1)}
        particles = {k for k in occupied if k > 0}
        holes = {k for k in range(-1, -2 * lam.length - 1, -2) if k not in occupied}
        return cls(frozenset(particles), frozenset(holes))

    @property
    def charge(self) -> int:
        return len(self.particles) - len(self.holes)

    @property
    def energy(self) -> Fraction:
        """Sum of particle positions minus sum of hole positions; |lambda| in charge zero."""
        return Fraction(sum(self.particles) - sum(self.holes), 2)

    def occupied(self, k: HalfExp) -> bool:
        return k in self.particles if k > 0 else k not in self.holes

    def count_above(self, k: HalfExp) -> int:
        """Number of occupied positions strictly greater than k."""
        if k > 0:
            return sum(1 for x in self.particles if x > k)
        negatives = (-k - 1) // 2
        return len(self.particles) + negatives - sum(1 for h in self.holes if h > k)

    def occupied_between(self, low: HalfExp, high: HalfExp) -> int:
        return self.count_above(low) - self.count_above(high) - (1 if self.occupied(high) else 0)

    def inserted(self, k: HalfExp) -> "MayaState":
        if k > 0:
            return MayaState(self.particles | {k}, self.holes)
        return MayaState(self.particles, self.holes - {k})

    def removed(self, k: HalfExp) -> "MayaState":
        if k > 0:
            return MayaState(self.particles - {k}, self.holes)
        return MayaState(self.particles, self.holes | {k})

    def span(self) -> Tuple[HalfExp, HalfExp]:
        """Doubled positions bracketing every non-vacuum feature of the state."""
        low = min(self.holes, default=-1)
        high = max(self.particles, default=1)
        return min(low, -1), max(high, 1)

    def occupied_descending(self) -> Iterator[HalfExp]:
        yield from sorted(self.particles, reverse=True)
        k = -1
        while True:
            if k not in self.holes:
                yield k
            k -= 2

    def to_partition(self) -> Partition:
        """
        Inverse of from_partition.

        Raises:
            ChargeError: If the state does not have charge zero.
        """
        if self.charge != 0:
            raise ChargeError(f"Only charge-zero states correspond to partitions (charge {self.charge}).")
        parts: List[int] = []
        # below the deepest hole every position is vacuum-occupied
        limit = max(len(self.particles), (1 - min(self.holes, default=-1)) // 2)
        for i, k in enumerate(self.occupied_descending(), start=1):
            if i > limit:
                break
            parts.append((k + 2 * i - 1) // 2)
        return Partition(tuple(p for p in parts if p > 0))

    def sort_key(self) -> Tuple:
        return self.charge, self.energy, tuple(sorted(self.particles)), tuple(sorted(self.holes))

    def __str__(self) -> str:
        parts = ",".join(format_half(k) for k in sorted(self.particles, reverse=True))
        holes = ",".join(format_half(k) for k in sorted(self.holes, reverse=True))
        return f"|{parts}; {holes}>"


def charge_zero_states(max_energy: int, min_energy: int = 0) -> List[MayaState]:
    from src.domain.partitions.models.partition import partitions_of

    return [MayaState.from_partition(lam) for n in range(min_energy, max_energy + 1) for lam in partitions_of(n)]


def state_label(state: MayaState) -> str:
    return str(state.to_partition()) if state.charge == 0 else str(state)


def optional_partition(state: MayaState) -> Optional[Partition]:
    return state.to_partition() if state.charge == 0 else None
