from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

from src.domain.schur.models.varlist import VarList


@dataclass(frozen=True)
class Gamma:
    """
    The vertex operator Gamma_sign(u^u_power q^q_power * variables).

    sign = +1 lowers energy, sign = -1 raises it.
    """

    sign: int
    variables: VarList = field(default_factory=VarList.principal)
    u_power: int = 0
    q_power: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"Gamma sign must be +1 or -1, got {self.sign}.")

    @classmethod
    def plus(cls, q_power: int = 0, u_power: int = 0, variables: Optional[VarList] = None) -> "Gamma":
        return cls(1, variables or VarList.principal(), u_power, q_power)

    @classmethod
    def minus(cls, q_power: int = 0, u_power: int = 0, variables: Optional[VarList] = None) -> "Gamma":
        return cls(-1, variables or VarList.principal(), u_power, q_power)

    def is_principal(self) -> bool:
        """True for u^j q^k p^-rho, the arguments the normal ordering rule accepts."""
        v = self.variables
        return v.shape.size == 0 and not v.inverted and v.shift == 0 and v.count is None

    def __str__(self) -> str:
        name = "G+" if self.sign > 0 else "G-"
        scale = "".join(f"{s}^{e}" for s, e in (("u", self.u_power), ("q", self.q_power)) if e)
        return f"{name}({scale}{'*' if scale else ''}{self.variables})"


@dataclass(frozen=True)
class EnergyOp:
    """E_r(p) for a fixed r, or E(a, p) = sum over the a-window of a^r E_r(p) when r is None."""

    r: Optional[int] = None

    def __str__(self) -> str:
        return "E(a,p)" if self.r is None else f"E_{self.r}(p)"


@dataclass(frozen=True)
class QPowerH:
    """The formal grading operator q^H."""

    def __str__(self) -> str:
        return "q^H"


Operator = Union[Gamma, EnergyOp, QPowerH]
OperatorChain = Tuple[Operator, ...]


def chain_label(chain: Sequence[Operator]) -> str:
    return " ".join(str(op) for op in chain)
