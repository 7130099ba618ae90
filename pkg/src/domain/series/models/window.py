from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from src.utils.exceptions import WindowError

# Exponents of p are stored doubled (p^(3/2) -> 3) so half-integral powers never round.
HalfExp = int

Number = Union[int, Fraction]


def to_twice(value: Union[int, str, Fraction]) -> HalfExp:
    """
    Converts an exponent given in p units (int, Fraction or "a/b" string) to its doubled form.

    Raises:
        WindowError: If the exponent is not a multiple of 1/2.
    """
    twice = Fraction(value) * 2
    if twice.denominator != 1:
        raise WindowError(f"Exponent {value} is not a multiple of 1/2.")
    return int(twice)


def format_half(twice: HalfExp) -> str:
    """Renders a doubled exponent back in p units, e.g. 3 -> '3/2', -4 -> '-2'."""
    if twice % 2 == 0:
        return str(twice // 2)
    return f"{twice}/2"


@dataclass(frozen=True)
class Window:
    """
    A p-window in doubled exponents.

    `high` is the top of the declared-valid range; `low` is a floor no
    coefficient may go below.
    """

    low: HalfExp
    high: HalfExp

    def __post_init__(self):
        if self.low > self.high:
            raise WindowError(
                f"Empty window: low {format_half(self.low)} exceeds high {format_half(self.high)}."
            )

    @classmethod
    def from_p(cls, low: Union[int, str, Fraction], high: Union[int, str, Fraction]) -> "Window":
        return cls(to_twice(low), to_twice(high))

    def contains(self, other: "Window") -> bool:
        return self.low <= other.low and other.high <= self.high

    def shifted(self, twice: HalfExp) -> "Window":
        """The window seen by a factor that is later multiplied by p^(twice/2)."""
        return Window(self.low - twice, self.high - twice)

    def widened(self, slack: HalfExp) -> "Window":
        return Window(self.low - slack, self.high + slack)

    def mirrored(self) -> "Window":
        return Window(-self.high, -self.low)

    @property
    def span(self) -> HalfExp:
        return self.high - self.low

    def as_list(self):
        return [self.low, self.high]

    def __str__(self) -> str:
        return f"[{format_half(self.low)}, {format_half(self.high)}]"
