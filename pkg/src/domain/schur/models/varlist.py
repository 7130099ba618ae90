from dataclasses import dataclass, field, replace
from typing import List, Optional

from src.domain.partitions.models.partition import Partition
from src.domain.series.models.window import HalfExp


@dataclass(frozen=True)
class VarList:
    """
    The principal variable list p^(shift/2) * p^(-nu-rho), or p^(shift/2) * p^(nu+rho) when inverted.

    With rho = (-1/2, -3/2, ...) variable i (1-based) is p^(-nu_i + i - 1/2), so
    past the first length(nu) entries the list is a geometric tail with ratio p
    (ratio p^-1 when inverted). `count` caps the number of leading variables
    the windowed backend keeps; None lets the window decide.
    """

    shape: Partition = field(default_factory=Partition)
    inverted: bool = False
    shift: HalfExp = 0
    count: Optional[int] = None

    @classmethod
    def principal(cls, shape: Optional[Partition] = None, inverted: bool = False) -> "VarList":
        return cls(shape or Partition(), inverted)

    @property
    def step(self) -> HalfExp:
        """Doubled exponent ratio of the tail."""
        return -2 if self.inverted else 2

    def exponent(self, i: int) -> HalfExp:
        """Doubled exponent of variable i (1-based)."""
        base = -2 * self.shape.part(i - 1) + 2 * i - 1
        return self.shift + (-base if self.inverted else base)

    def head(self) -> List[HalfExp]:
        return [self.exponent(i) for i in range(1, self.shape.length + 1)]

    def tail_start(self) -> HalfExp:
        return self.exponent(self.shape.length + 1)

    def variables(self, m: int) -> List[HalfExp]:
        return [self.exponent(i) for i in range(1, m + 1)]

    def with_count(self, m: int) -> "VarList":
        return replace(self, count=m)

    def scaled(self, twice: HalfExp) -> "VarList":
        return replace(self, shift=self.shift + twice)

    def __str__(self) -> str:
        sign = "+" if self.inverted else "-"
        scale = f"p^({self.shift}/2)*" if self.shift else ""
        return f"{scale}p^({sign}({self.shape})+rho)"
