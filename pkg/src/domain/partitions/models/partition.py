from dataclasses import dataclass, field
from typing import Iterator, List, Tuple

from src.utils.exceptions import PartitionFormatError

Cell2D = Tuple[int, int]


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive parts; the empty tuple is the empty partition."""

    parts: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 1 for p in parts):
            raise PartitionFormatError(f"Partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise PartitionFormatError(f"Partition parts must be weakly decreasing: {parts}")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """
        Parses "3,1" style text; "-" (or an empty string) is the empty partition.

        Raises:
            PartitionFormatError: If the text is not a weakly decreasing list of positive integers.
        """
        text = text.strip()
        if text in ("", "-"):
            return cls()
        try:
            parts = tuple(int(piece) for piece in text.split(","))
        except ValueError:
            raise PartitionFormatError(f"Malformed partition '{text}'.", text=text)
        return cls(parts)

    @classmethod
    def box(cls) -> "Partition":
        return cls((1,))

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def norm2(self) -> int:
        return sum(p * p for p in self.parts)

    def stats(self) -> Tuple[int, int, int]:
        """(|lambda|, ||lambda||^2, length)."""
        return self.size, self.norm2, self.length

    def part(self, i: int) -> int:
        """The i-th part (0-based), zero past the end."""
        return self.parts[i] if i < len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def contains(self, other: "Partition") -> bool:
        """True when other's diagram lies inside this one."""
        return other.length <= self.length and all(q <= self.part(i) for i, q in enumerate(other.parts))

    def cells(self) -> List[Cell2D]:
        return [(i, j) for i, p in enumerate(self.parts) for j in range(p)]

    def subpartitions(self) -> List["Partition"]:
        """Every eta contained in this partition, smallest first."""
        out = [Partition()]
        for i, bound in enumerate(self.parts):
            grown = []
            for eta in out:
                if eta.length < i:
                    continue
                cap = eta.parts[i - 1] if i else bound
                for value in range(1, min(bound, cap) + 1):
                    grown.append(Partition(eta.parts + (value,)))
            out += grown
        return sorted(set(out), key=lambda eta: (eta.size, tuple(-p for p in eta.parts)))

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts) if self.parts else "-"


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of n in reverse-lexicographic order: (n), (n-1,1), ..., (1^n)."""
    if n < 0:
        raise ValueError("n must be nonnegative.")

    def grow(remaining: int, cap: int, prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield prefix
            return
        for part in range(min(remaining, cap), 0, -1):
            yield from grow(remaining - part, part, prefix + (part,))

    for parts in grow(n, n, ()):
        yield Partition(parts)


def partitions_up_to(n: int) -> List[Partition]:
    return [lam for size in range(n + 1) for lam in partitions_of(size)]


@dataclass(frozen=True)
class LegTriple:
    """Asymptotic legs (lambda, mu, nu) along the i, j and k axes."""

    lam: Partition = field(default_factory=Partition)
    mu: Partition = field(default_factory=Partition)
    nu: Partition = field(default_factory=Partition)

    @classmethod
    def parse(cls, text: str) -> "LegTriple":
        """
        Parses "3,1;2;-".

        Raises:
            PartitionFormatError: If there are not exactly three legs or a leg is malformed.
        """
        pieces = text.split(";")
        if len(pieces) != 3:
            raise PartitionFormatError(f"A leg triple needs three ';'-separated partitions, got '{text}'.")
        return cls(*(Partition.parse(piece) for piece in pieces))

    def as_tuple(self) -> Tuple[Partition, Partition, Partition]:
        return self.lam, self.mu, self.nu

    @property
    def size(self) -> int:
        return self.lam.size + self.mu.size + self.nu.size

    def max_dimension(self) -> int:
        return max(
            [self.lam.part(0), self.lam.length, self.mu.part(0), self.mu.length, self.nu.part(0), self.nu.length]
        )

    def cyclic(self) -> "LegTriple":
        """(lambda, mu, nu) -> (mu, nu, lambda)."""
        return LegTriple(self.mu, self.nu, self.lam)

    def reflected(self) -> "LegTriple":
        """(lambda, mu, nu) -> (mu', lambda', nu'), the reflection about the i = j plane."""
        return LegTriple(self.mu.conjugate(), self.lam.conjugate(), self.nu.conjugate())

    def __str__(self) -> str:
        return f"{self.lam};{self.mu};{self.nu}"


def leg_triples_up_to(total: int) -> List[LegTriple]:
    """All leg triples with |lambda| + |mu| + |nu| <= total, in a fixed order."""
    out = []
    for a in range(total + 1):
        for b in range(total + 1 - a):
            for c in range(total + 1 - a - b):
                for lam in partitions_of(a):
                    for mu in partitions_of(b):
                        for nu in partitions_of(c):
                            out.append(LegTriple(lam, mu, nu))
    return out
