from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from src.config.settings import settings
from src.domain.partitions.models.partition import LegTriple
from src.domain.partitions.models.partition3d import (
    Cell, Partition3D, leg_multiplicity, predecessors, successors,
)
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.window import HalfExp
from src.utils.exceptions import StabilityError
from src.utils.logger import Logger
from src.utils.parallel import ordered_map

logger = Logger(__name__)


@dataclass(frozen=True)
class MinimalConfig:
    overlap_cells: Dict[Cell, int]
    base_volume: int


def _addable(legs: LegTriple, cell: Cell, extra) -> bool:
    if leg_multiplicity(legs, cell) or cell in extra:
        return False
    return all(leg_multiplicity(legs, pred) or pred in extra for pred in predecessors(cell))


def _initial_candidates(legs: LegTriple, box: int) -> List[Cell]:
    cells = [
        (i, j, k) for i in range(box) for j in range(box) for k in range(box)
        if _addable(legs, (i, j, k), ())
    ]
    return sorted(cells, key=_order_key)


def _order_key(cell: Cell) -> Tuple[int, int, int]:
    i, j, k = cell
    return i + j + k, i, j


def _count_branch(args: Tuple[LegTriple, int, int, int]) -> Dict[int, int]:
    """Counts the configurations whose first extra box is candidate number `index`."""
    legs, budget, box, index = args
    counts: Counter = Counter()
    candidates = _initial_candidates(legs, box)
    extra = set()

    def dfs(chosen: Cell, pool: List[Cell]):
        extra.add(chosen)
        counts[len(extra)] += 1
        if len(extra) < budget:
            fresh = [
                s for s in successors(chosen)
                if max(s) < box and _addable(legs, s, extra)
            ]
            pool = sorted(pool + fresh, key=_order_key)
            for idx, cell in enumerate(pool):
                dfs(cell, pool[idx + 1:])
        extra.discard(chosen)

    if budget > 0:
        dfs(candidates[index], candidates[index + 1:])
    return dict(counts)


class EnumerationService:
    """Exact enumeration of 3D partitions asymptotic to a triple of legs."""

    def minimal_config(self, legs: LegTriple) -> MinimalConfig:
        """
        Finds the cells lying in two or more legs and the renormalized volume of the leg union.

        Args:
            legs: The asymptotic legs.

        Returns:
            MinimalConfig: Overlap cells with their leg multiplicities, and the base volume.
        """
        reach = legs.max_dimension()
        overlaps: Dict[Cell, int] = {}
        for i in range(reach):
            for j in range(reach):
                for k in range(reach):
                    m = leg_multiplicity(legs, (i, j, k))
                    if m >= 2:
                        overlaps[(i, j, k)] = m
        base = sum(1 - m for m in overlaps.values())
        return MinimalConfig(overlaps, base)

    def renormalized_volume(self, partition: Partition3D) -> int:
        return self.minimal_config(partition.legs).base_volume + len(partition.extra)

    @staticmethod
    def bounding_box(legs: LegTriple, budget: int) -> int:
        return budget + legs.max_dimension() + 1

    def enumerate_asymptotic(self, legs: LegTriple, budget: int, jobs: int = 1,
                             box: Optional[int] = None, check_box: Optional[bool] = None) -> Dict[int, int]:
        """
        Counts 3D partitions asymptotic to `legs` by renormalized volume.

        Args:
            legs: The asymptotic legs.
            budget: Maximal number of boxes outside the leg union.
            jobs: Worker processes for the top-level DFS branches.
            box: Override for the bounding box edge.
            check_box: Re-run with a box one larger and fail on any difference.

        Returns:
            Dict[int, int]: volume -> count for every volume in [base, base + budget].

        Raises:
            StabilityError: If the bounding-box stability check fails.
        """
        if budget < 0:
            raise ValueError("budget must be nonnegative.")
        edge = box if box is not None else self.bounding_box(legs, budget)
        counts = self._count(legs, budget, edge, jobs)
        if check_box if check_box is not None else settings.BOX_STABILITY_CHECK:
            wider = self._count(legs, budget, edge + 1, jobs)
            if wider != counts:
                raise StabilityError(
                    f"Bounding box {edge} is not stable for legs {legs}.", legs=str(legs), box=edge
                )
        base = self.minimal_config(legs).base_volume
        logger.debug("Legs %s, budget %d, box %d: %s", legs, budget, edge, counts)
        return {base + n: counts.get(n, 0) for n in range(budget + 1)}

    @staticmethod
    def _count(legs: LegTriple, budget: int, box: int, jobs: int) -> Dict[int, int]:
        candidates = _initial_candidates(legs, box)
        total: Counter = Counter({0: 1})
        if budget:
            for branch in ordered_map(_count_branch, [(legs, budget, box, i) for i in range(len(candidates))], jobs):
                total.update(branch)
        return dict(total)

    def vertex_box_counting(self, legs: LegTriple, top: HalfExp, jobs: int = 1,
                            check_box: Optional[bool] = None) -> PSeries:
        """V_{lambda mu nu}(p) = sum_pi p^|pi|, exact up to p^(top/2)."""
        base = self.minimal_config(legs).base_volume
        budget = max(top // 2 - base, -1)
        if budget < 0:
            return PSeries({}, top, top)
        counts = self.enumerate_asymptotic(legs, budget, jobs=jobs, check_box=check_box)
        return PSeries({2 * v: c for v, c in counts.items()}, lower=2 * base, top=top)
