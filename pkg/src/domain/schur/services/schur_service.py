from dataclasses import dataclass
from typing import Dict, List, Optional

from src.domain.partitions.models.partition import Partition
from src.domain.schur.models.varlist import VarList
from src.domain.schur.services.determinant import determinant
from src.domain.series.models.pseries import Mismatch, PSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import HalfExp
from src.domain.series.repositories.series_cache import SeriesCache
from src.utils.exceptions import WindowError
from src.utils.logger import Logger

logger = Logger(__name__)


@dataclass(frozen=True)
class ConjugationResult:
    lhs: RationalLaurent
    rhs: RationalLaurent
    passed: bool
    mismatches: List[Mismatch]


def _head_complete(exponents: List[HalfExp], kmax: int) -> List[PSeries]:
    """h_0..h_kmax of finitely many monomial variables, as exact polynomials."""
    h = [PSeries.one()] + [PSeries.zero() for _ in range(kmax)]
    for x in exponents:
        for j in range(1, kmax + 1):
            h[j] = h[j] + h[j - 1].shift(x)
    return h


def _head_elementary(exponents: List[HalfExp], kmax: int) -> List[PSeries]:
    e = [PSeries.one()] + [PSeries.zero() for _ in range(kmax)]
    for x in exponents:
        for j in range(kmax, 0, -1):
            e[j] = e[j] + e[j - 1].shift(x)
    return e


class SchurService:
    """
    Symmetric functions at principal specializations.

    Two backends: the exact one returns RationalLaurent values for any list
    u*p^(-+(nu+rho)) (finite head times a geometric tail); the windowed one
    works with the first m variables as exact polynomials and truncates.
    """

    def __init__(self, cache: SeriesCache):
        self.cache = cache

    # -- exact backend ------------------------------------------------

    def _tail_factors(self, k: int, inverted: bool) -> List[int]:
        return [-i for i in range(1, k + 1)] if inverted else list(range(1, k + 1))

    def complete_exact(self, variables: VarList, k: int) -> RationalLaurent:
        """h_k(variables) in rational form."""
        if k < 0:
            return RationalLaurent.zero()
        key = ("h", variables.shape, variables.inverted, variables.shift, k)

        def compute() -> RationalLaurent:
            head = _head_complete(variables.head(), k)
            start = variables.tail_start()
            total = RationalLaurent.zero()
            for j in range(k + 1):
                tail = RationalLaurent.from_factors(
                    PSeries.monomial((k - j) * start), self._tail_factors(k - j, variables.inverted)
                )
                total = total + tail * head[j]
            return total

        return self.cache.get_or_compute(key, compute)

    def elementary_exact(self, variables: VarList, k: int) -> RationalLaurent:
        """e_k(variables) in rational form."""
        if k < 0:
            return RationalLaurent.zero()
        key = ("e", variables.shape, variables.inverted, variables.shift, k)

        def compute() -> RationalLaurent:
            head = _head_elementary(variables.head(), k)
            start = variables.tail_start()
            total = RationalLaurent.zero()
            for j in range(k + 1):
                n = k - j
                twist = n * (n - 1) * (-1 if variables.inverted else 1)
                tail = RationalLaurent.from_factors(
                    PSeries.monomial(n * start + twist), self._tail_factors(n, variables.inverted)
                )
                total = total + tail * head[j]
            return total

        return self.cache.get_or_compute(key, compute)

    def power_sum(self, variables: VarList, n: int) -> RationalLaurent:
        """p_n(variables) = sum_i x_i^n in rational form."""
        if n < 1:
            raise ValueError("Power sums are indexed by n >= 1.")
        head = PSeries.polynomial((n * x, 1) for x in variables.head())
        tail = RationalLaurent.from_factors(
            PSeries.monomial(n * variables.tail_start()), [-n if variables.inverted else n]
        )
        return tail + RationalLaurent(head)

    def complete_homogeneous_exact(self, variables: VarList, kmax: int) -> List[RationalLaurent]:
        if kmax < 0:
            raise ValueError("kmax must be nonnegative.")
        return [self.complete_exact(variables, k) for k in range(kmax + 1)]

    def skew_schur_exact(self, lam: Partition, eta: Partition, variables: VarList) -> RationalLaurent:
        """
        s_{lambda/eta}(variables) by the smaller of the Jacobi-Trudi determinants.

        Returns zero when eta is not contained in lambda.
        """
        if not lam.contains(eta):
            return RationalLaurent.zero()
        if lam == eta:
            return RationalLaurent.one()
        key = ("skew", lam, eta, variables.shape, variables.inverted, variables.shift)

        def compute() -> RationalLaurent:
            if lam.length <= lam.part(0):
                rows, inner, entry = lam, eta, self.complete_exact
            else:
                rows, inner, entry = lam.conjugate(), eta.conjugate(), self.elementary_exact
            n = rows.length
            matrix = []
            for i in range(n):
                row = []
                for j in range(n):
                    k = rows.part(i) - inner.part(j) - i + j
                    row.append(None if k < 0 else entry(variables, k))
                matrix.append(row)
            return determinant(matrix, RationalLaurent.one(), RationalLaurent.zero()).reduce()

        return self.cache.get_or_compute(key, compute)

    # -- windowed backend ---------------------------------------------

    def variable_count(self, lam: Partition, variables: VarList, top: HalfExp) -> int:
        """
        Leading variables needed so that dropping the rest cannot touch exponents <= top.

        Every monomial of degree <= |lambda| containing a dropped variable has exponent at
        least x_(m+1) + (|lambda| - 1) * min(0, smallest exponent).
        """
        if variables.count is not None:
            return variables.count
        if variables.inverted:
            raise WindowError("The windowed backend needs an ascending variable list.")
        lowest = min([variables.exponent(1), variables.tail_start()] + variables.head())
        reach = top - max(lam.size - 1, 0) * min(0, lowest)
        m = variables.shape.length
        while variables.exponent(m + 1) <= reach:
            m += 1
        return m

    def complete_homogeneous(self, variables: VarList, kmax: int, top: HalfExp,
                             count: Optional[int] = None) -> List[PSeries]:
        """
        h_0..h_kmax over the leading variables, truncated at p^(top/2).

        Raises:
            ValueError: If kmax is negative.
        """
        if kmax < 0:
            raise ValueError("kmax must be nonnegative.")
        m = count if count is not None else self.variable_count(Partition((kmax,)) if kmax else Partition(),
                                                                  variables, top)
        return [h.truncate(top) for h in _head_complete(variables.variables(m), kmax)]

    def skew_schur(self, lam: Partition, eta: Partition, variables: VarList, top: HalfExp,
                   backend: str = "exact") -> PSeries:
        """
        s_{lambda/eta}(variables) expanded up to p^(top/2).

        Args:
            lam: Outer shape.
            eta: Inner shape; not contained in lam gives zero.
            variables: The principal variable list.
            top: Doubled window top.
            backend: "exact" (rational form, expanded ascending) or "windowed" (first m variables).

        Returns:
            PSeries: The truncated value.
        """
        if backend == "exact":
            return self.skew_schur_exact(lam, eta, variables).expand(top)
        if not lam.contains(eta):
            return PSeries.zero(top)
        m = self.variable_count(lam, variables, top)
        h = _head_complete(variables.variables(m), lam.part(0) + lam.length)
        n = lam.length
        matrix = []
        for i in range(n):
            row = []
            for j in range(n):
                k = lam.part(i) - eta.part(j) - i + j
                row.append(None if k < 0 else h[k])
            matrix.append(row)
        logger.debug("Windowed s_%s/%s with %d variables", lam, eta, m)
        return determinant(matrix, PSeries.one(), PSeries.zero()).truncate(top)

    # -- ratios and relations -----------------------------------------

    def ratio_box(self, lam: Partition) -> RationalLaurent:
        """p^(1/2) V_{lambda,box,0}/V_{lambda,0,0} = sum_i p^(-lambda_i + i - 1/2)."""
        return self.power_sum(VarList.principal(lam), 1)

    def descending_sum(self, lam: Partition) -> RationalLaurent:
        """sum_i p^(lambda_i - i + 1/2), held in rational form."""
        return self.power_sum(VarList.principal(lam, inverted=True), 1)

    def ratio_two_box(self, lam: Partition) -> RationalLaurent:
        """p V_{lambda,box,box}/V_{lambda,0,0} = 1 - (sum_i p^(-lambda_i+i-1/2)) (sum_j p^(lambda_j-j+1/2))."""
        return RationalLaurent.one() - self.ratio_box(lam) * self.descending_sum(lam)

    def conjugation_relation_check(self, lam: Partition, eta: Partition, nu: Partition,
                                   top: HalfExp) -> ConjugationResult:
        """
        s_{lambda/eta}(p^(nu+rho)) = (-1)^(|lambda|-|eta|) s_{lambda'/eta'}(p^(-nu'-rho)).

        Decided by cross-multiplication, then both rational forms are expanded on the window.
        """
        lhs = self.skew_schur_exact(lam, eta, VarList.principal(nu, inverted=True))
        rhs = self.skew_schur_exact(lam.conjugate(), eta.conjugate(), VarList.principal(nu.conjugate()))
        if (lam.size - eta.size) % 2:
            rhs = -rhs
        passed = lhs == rhs
        mismatches = lhs.expand(top).mismatches(rhs.expand(top))
        return ConjugationResult(lhs, rhs, passed and not mismatches, mismatches)
