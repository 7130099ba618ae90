from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Tuple

from src.domain.partitions.models.partition import LegTriple

Cell = Tuple[int, int, int]


def leg_multiplicity(legs: LegTriple, cell: Cell) -> int:
    """
    Number of legs through a cell.

    The lambda leg runs along i over the cells with j < lambda_k, the mu leg
    along j over k < mu_i, and the nu leg along k over i < nu_j.
    """
    i, j, k = cell
    count = 0
    if j < legs.lam.part(k):
        count += 1
    if k < legs.mu.part(i):
        count += 1
    if i < legs.nu.part(j):
        count += 1
    return count


def predecessors(cell: Cell) -> Iterable[Cell]:
    i, j, k = cell
    if i:
        yield (i - 1, j, k)
    if j:
        yield (i, j - 1, k)
    if k:
        yield (i, j, k - 1)


def successors(cell: Cell) -> Tuple[Cell, Cell, Cell]:
    i, j, k = cell
    return (i + 1, j, k), (i, j + 1, k), (i, j, k + 1)


@dataclass(frozen=True)
class Partition3D:
    """A 3D partition asymptotic to `legs`, stored as the finitely many boxes outside the leg union."""

    legs: LegTriple
    extra: FrozenSet[Cell] = field(default_factory=frozenset)

    def contains(self, cell: Cell) -> bool:
        return cell in self.extra or leg_multiplicity(self.legs, cell) > 0

    def is_valid(self) -> bool:
        """Extra boxes lie outside the legs and every box has all its predecessors."""
        for cell in self.extra:
            if min(cell) < 0 or leg_multiplicity(self.legs, cell):
                return False
            if not all(self.contains(pred) for pred in predecessors(cell)):
                return False
        return True
