from dataclasses import dataclass
from typing import Optional

from src.utils.exceptions import CaseError

CASES = ("F", "BF", "Nfib", "BN", "BpF")
GENUS_CASES = ("BF", "BN", "BpF")
ALIASES = {"N": "Nfib"}


@dataclass(frozen=True)
class DtCase:
    """
    A curve class on the elliptic fibration: a fiber F, a nodal fiber N, or the section B
    (genus g) or B' (genus g') plus fibers.
    """

    case: str
    genus: Optional[int] = None

    def __post_init__(self):
        case = ALIASES.get(self.case, self.case)
        object.__setattr__(self, "case", case)
        if case not in CASES:
            raise CaseError(f"Unknown DT case '{self.case}'; expected one of {CASES}.", case=self.case)
        if case in GENUS_CASES:
            if self.genus is None:
                raise CaseError(f"Case {case} needs a genus.", case=case)
            if self.genus < 0:
                raise CaseError(f"Genus must be nonnegative, got {self.genus}.", case=case)
        elif self.genus is not None:
            raise CaseError(f"Case {case} takes no genus.", case=case)

    @classmethod
    def parse(cls, case: str, genus: Optional[int] = None) -> "DtCase":
        """Builds a case from CLI input, dropping a genus the case ignores."""
        case = ALIASES.get(case, case)
        return cls(case, genus if case in GENUS_CASES else None)

    @property
    def g(self) -> int:
        return self.genus or 0

    def __str__(self) -> str:
        return self.case if self.genus is None else f"{self.case}(g={self.genus})"
