import time
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.domain.fock.services.check_service import FockCheckService
from src.domain.identities.models.report import IdentityReport, power_mismatches, series_mismatches
from src.domain.partitions.models.partition import LegTriple, Partition, partitions_up_to
from src.domain.partitions.services.enumeration_service import EnumerationService
from src.domain.schur.models.varlist import VarList
from src.domain.schur.services.schur_service import SchurService
from src.domain.schur.services.vertex_service import VertexService
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import Window
from src.domain.series.repositories.series_cache import SeriesCache
from src.domain.series.services.product_service import (
    Factor,
    ProductService,
    divisor_pairs,
    macmahon_factors,
    partition_factors,
)
from src.utils.logger import Logger
from src.utils.parallel import ordered_map, resolve_jobs

logger = Logger(__name__)

IDENTITY_IDS = (2, 3, 4, 5)

# Identities whose left side carries an overall M(p).
WITH_MACMAHON = (2, 5)

_worker_vertex: Optional[VertexService] = None


def _worker_term(task: Tuple[int, Partition]) -> RationalLaurent:
    """Worker-process entry point for one lambda-term; each process keeps its own caches."""
    global _worker_vertex
    if _worker_vertex is None:
        cache = SeriesCache()
        _worker_vertex = VertexService(SchurService(cache), ProductService(cache))
    return lambda_term(_worker_vertex, *task)


def lambda_term(vertex_service: VertexService, identity_id: int, lam: Partition) -> RationalLaurent:
    """
    The lambda-term of the left side of identity 2, 3, 4 or 5 as an exact rational function.

    Terms of identities 2 and 5 are divided by M(p).
    """
    schur = vertex_service.schur_service
    if identity_id == 2:
        lam_t = lam.conjugate()
        return vertex_service.vertex_rational(LegTriple(lam_t, lam, Partition())).shift(2 * lam_t.norm2)
    if identity_id == 3:
        return schur.ratio_box(lam).shift(-1)
    if identity_id == 4:
        # p V_{box box lambda} / V_{0 0 lambda}, read as V_{lambda box box} by cyclic symmetry.
        return schur.ratio_two_box(lam)
    if identity_id == 5:
        vertex = vertex_service.vertex_rational(LegTriple(lam, lam.conjugate(), Partition()))
        return (vertex * schur.ratio_box(lam)).shift(2 * lam.norm2 - 1)
    raise ValueError(f"Unknown identity {identity_id}; expected one of {IDENTITY_IDS}.")


class IdentityService:
    """Both sides of the four generating-function identities, built independently."""

    def __init__(self, vertex_service: VertexService, product_service: ProductService,
                 enumeration_service: EnumerationService, fock_check_service: FockCheckService):
        self.vertex_service = vertex_service
        self.product_service = product_service
        self.enumeration_service = enumeration_service
        self.fock_check_service = fock_check_service

    @staticmethod
    def _check_id(identity_id: int):
        if identity_id not in IDENTITY_IDS:
            raise ValueError(f"Unknown identity {identity_id}; expected one of {IDENTITY_IDS}.")

    def lhs_rows(self, identity_id: int, order: int, jobs: Optional[int] = None) -> Dict[int, RationalLaurent]:
        """sum over |lambda| = d of the lambda-terms, for d = 0..N, summed in partition order."""
        self._check_id(identity_id)
        partitions = partitions_up_to(order)
        tasks = [(identity_id, lam) for lam in partitions]
        if resolve_jobs(jobs) > 1:
            terms = ordered_map(_worker_term, tasks, jobs)
        else:
            terms = [lambda_term(self.vertex_service, *task) for task in tasks]
        rows: Dict[int, RationalLaurent] = {}
        for lam, term in zip(partitions, terms):
            rows[lam.size] = rows[lam.size] + term if lam.size in rows else term
        return rows

    def rows_to_series(self, rows: Dict[int, RationalLaurent], order: int, top: int,
                       with_macmahon: bool) -> QSeries:
        if not with_macmahon:
            return QSeries.from_rational(order, rows, top)
        lowest = min((v.numerator.valuation() for v in rows.values() if not v.is_zero()), default=0)
        macmahon = self.product_service.macmahon(top - min(lowest, 0))
        return (QSeries.from_rational(order, rows, top) * macmahon).truncate(top)

    def lhs(self, identity_id: int, order: int, window: Window, jobs: Optional[int] = None) -> QSeries:
        """
        The left side summed over |lambda| <= N.

        Args:
            identity_id: 2, 3, 4 or 5.
            order: The q-order N.
            window: p-window; the per-lambda terms are exact and expanded at its top.
            jobs: Worker processes for the lambda-terms.

        Returns:
            QSeries: The truncated left side.
        """
        rows = self.lhs_rows(identity_id, order, jobs)
        return self.rows_to_series(rows, order, window.high, identity_id in WITH_MACMAHON)

    def rhs(self, identity_id: int, order: int, window: Window) -> QSeries:
        """
        The product side.

        Raises:
            WindowError: If the window floor cuts off p^-N.
        """
        self._check_id(identity_id)
        products = self.product_service
        top = window.high
        if identity_id == 2:
            factors: List[Factor] = partition_factors(order)
            for d in range(1, order + 1):
                factors += macmahon_factors(top, q_exp=d)
            body = products.euler_product(factors, order, window)
            return (body * products.macmahon(top)).truncate(top)
        if identity_id == 3:
            factors = []
            for d in range(1, order + 1):
                factors += [(0, d, 1), (2, d, -1), (-2, d, -1)]
            body = products.euler_product(factors, order, window)
            return (body * RationalLaurent(PSeries.one(), {1: 1}).expand(top - window.low)).truncate(top)
        if identity_id == 4:
            return (self.eq4_braces(order, top) * products.partition_series(order)).truncate(top)
        body = products.elliptic_product(order, window)
        reach = top - window.low
        prefactor = RationalLaurent(PSeries.one(), {1: 1}).expand(reach) * products.macmahon(reach)
        return (body * prefactor).truncate(top)

    @staticmethod
    def eq4_braces(order: int, top: int) -> QSeries:
        """1 + p/(1-p)^2 + sum_d sum_(k|d) k (p^k + p^-k) q^d."""
        rows: Dict[int, RationalLaurent] = {
            0: RationalLaurent.one() + RationalLaurent(PSeries.monomial(2), {1: 2})
        }
        table: Dict[int, Dict[int, Fraction]] = {}
        for d, k in divisor_pairs(order):
            row = table.setdefault(d, {})
            for e in (2 * k, -2 * k):
                row[e] = row.get(e, Fraction(0)) + k
        for d, row in table.items():
            rows[d] = RationalLaurent(PSeries(row))
        return QSeries.from_rational(order, rows, top)

    def eq2_schur_route(self, order: int, window: Window) -> QSeries:
        """sum_(|lambda| <= N, eta in lambda) q^|lambda| s_{lambda/eta}(p^-rho)^2, brute force."""
        schur = self.vertex_service.schur_service
        rows: Dict[int, RationalLaurent] = {}
        for lam in partitions_up_to(order):
            for eta in lam.subpartitions():
                value = schur.skew_schur_exact(lam, eta, VarList.principal())
                term = value * value
                rows[lam.size] = rows[lam.size] + term if lam.size in rows else term
        return QSeries.from_rational(order, rows, window.high)

    def eq2_product_side(self, order: int, window: Window) -> QSeries:
        """prod_d (1 - q^d)^-1 prod_m (1 - q^d p^m)^-m."""
        factors: List[Factor] = partition_factors(order)
        for d in range(1, order + 1):
            factors += macmahon_factors(window.high, q_exp=d)
        return self.product_service.euler_product(factors, order, window)

    def verify(self, identity_id: int, order: int, window: Window, jobs: Optional[int] = None,
               radius: Optional[int] = None) -> IdentityReport:
        """
        Compares both sides coefficientwise. Identity 2 also checks the Schur-orthogonality
        route; identity 5 adds the two trace routes of the Fock space.
        """
        self._check_id(identity_id)
        started = time.perf_counter()
        left = self.lhs(identity_id, order, window, jobs)
        right = self.rhs(identity_id, order, window)
        report = IdentityReport(
            check=f"identity-{identity_id}",
            params={"id": identity_id, "qmax": order, "window": window.as_list()},
            mismatches=series_mismatches(left.mismatches(right), "lhs_rhs"),
            series={"lhs": left, "rhs": right},
        )
        parts: List[IdentityReport] = []
        if identity_id == 2:
            middle = self.eq2_schur_route(order, window)
            product = self.eq2_product_side(order, window)
            parts.append(IdentityReport(
                check="schur_route",
                mismatches=series_mismatches(middle.mismatches(product), "schur_route"),
                series={"middle": middle},
            ))
        if identity_id == 5:
            radius = radius if radius is not None else self.product_service.triple_product_radius(order)
            report.params["awin"] = radius
            parts.append(self.fock_check_service.lemma51_check(order, window, 1))
            parts.append(self.fock_check_service.lemma52_check(order, window, radius))
        if parts:
            report = report.merged(parts)
        report.timings["total"] = time.perf_counter() - started
        logger.info("Identity %d to q^%d on %s: %s (%d mismatches, %.2fs)", identity_id, order, window,
                    report.status, len(report.mismatches), report.timings["total"])
        return report

    def box_ratio_check(self, identity_id: int, max_size: int, top: int, jobs: int = 1) -> IdentityReport:
        """
        Checks the rational lambda-terms of identity 3 or 4 against box counting:
        V_{lambda box 0} = p^(-1/2) ratio_box(lambda) V_{lambda 0 0} and
        V_{box box lambda} = p^-1 ratio_two_box(lambda) V_{0 0 lambda}, up to p^(top/2).
        """
        if identity_id not in (3, 4):
            raise ValueError("Box-counting ratios exist for identities 3 and 4 only.")
        box, empty = Partition.box(), Partition()
        mismatches = []
        for lam in partitions_up_to(max_size):
            if identity_id == 3:
                ratio = lambda_term(self.vertex_service, 3, lam)
                base_legs, target_legs = LegTriple(lam, empty, empty), LegTriple(lam, box, empty)
            else:
                ratio = lambda_term(self.vertex_service, 4, lam).shift(-2)
                base_legs, target_legs = LegTriple(empty, empty, lam), LegTriple(box, box, lam)
            low = ratio.numerator.valuation()
            base = self.enumeration_service.vertex_box_counting(base_legs, top - min(low, 0), jobs)
            predicted = (ratio.expand(top - base.lower) * base).truncate(top)
            counted = self.enumeration_service.vertex_box_counting(target_legs, top, jobs)
            mismatches += power_mismatches(counted.mismatches(predicted), f"box_ratio_{identity_id}", str(lam))
        return IdentityReport(
            check=f"box-ratio-{identity_id}",
            params={"id": identity_id, "max_size": max_size, "pmax": Fraction(top, 2)},
            mismatches=mismatches,
        )
