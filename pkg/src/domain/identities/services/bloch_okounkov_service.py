import time
from fractions import Fraction
from typing import Dict, List

from src.domain.identities.models.report import IdentityReport, Mismatch, series_mismatches
from src.domain.identities.services.identity_service import IdentityService
from src.domain.partitions.models.partition import partitions_up_to
from src.domain.schur.services.schur_service import SchurService
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import HalfExp, Window
from src.domain.series.services.product_service import ProductService, divisor_pairs
from src.utils.logger import Logger

logger = Logger(__name__)

POINTS = ("one-p", "one-pinv", "two")


def _divisor_rows(order: int, weight) -> Dict[int, Dict[HalfExp, Fraction]]:
    """{d: sum over m k = d of weight(k)}, with weight(k) a list of (doubled exponent, coefficient)."""
    table: Dict[int, Dict[HalfExp, Fraction]] = {}
    for d, k in divisor_pairs(order):
        row = table.setdefault(d, {})
        for e, c in weight(k):
            row[e] = row.get(e, Fraction(0)) + c
    return table


class BlochOkounkovService:
    """
    One- and two-point correlators F = prod(1 - q^m) sum_lambda q^|lambda| prod_k sum_i p_k^(lambda_i - i + 1/2)
    and the checks that tie them to theta and to identities 3 and 4.
    """

    def __init__(self, schur_service: SchurService, product_service: ProductService,
                 identity_service: IdentityService):
        self.schur_service = schur_service
        self.product_service = product_service
        self.identity_service = identity_service

    def _term(self, point: str, lam) -> RationalLaurent:
        if point == "one-p":
            return self.schur_service.descending_sum(lam)
        if point == "one-pinv":
            return self.schur_service.ratio_box(lam)
        if point == "two":
            return self.schur_service.descending_sum(lam) * self.schur_service.ratio_box(lam)
        raise ValueError(f"Unknown correlator {point!r}; expected one of {POINTS}.")

    def bo_correlator(self, point: str, order: int, window: Window) -> QSeries:
        """
        The correlator at p, at p^-1, or the two-point function at (p, p^-1).

        Each lambda-factor stays a rational function until the rows are expanded
        ascending at the window top.
        """
        if point not in POINTS:
            raise ValueError(f"Unknown correlator {point!r}; expected one of {POINTS}.")
        rows: Dict[int, RationalLaurent] = {}
        for lam in partitions_up_to(order):
            term = self._term(point, lam)
            rows[lam.size] = rows[lam.size] + term if lam.size in rows else term
        series = QSeries.from_rational(order, rows, window.high)
        return (series * self.product_service.partition_series(order, power=1)).truncate(window.high)

    def two_point_closed_form(self, order: int, window: Window) -> QSeries:
        """1/((1-p)(1-p^-1)) - sum_m sum_k k (p^k + p^-k) q^(mk)."""
        table = _divisor_rows(order, lambda k: [(2 * k, -k), (-2 * k, -k)])
        rows = {d: RationalLaurent(PSeries(row)) for d, row in table.items()}
        rows[0] = RationalLaurent(PSeries.monomial(2, -1), {1: 2})
        return QSeries.from_rational(order, rows, window.high)

    def log_deriv_closed_form(self, order: int, window: Window) -> QSeries:
        """(1/2)(p+1)/(p-1) + sum_m sum_k (-p^k + p^-k) q^(mk)."""
        table = _divisor_rows(order, lambda k: [(2 * k, -1), (-2 * k, 1)])
        rows = {d: RationalLaurent(PSeries(row)) for d, row in table.items()}
        rows[0] = RationalLaurent(PSeries({0: Fraction(-1, 2), 2: Fraction(-1, 2)}), {1: 1})
        return QSeries.from_rational(order, rows, window.high)

    # -- checks -------------------------------------------------------

    def one_point_check(self, order: int, window: Window) -> IdentityReport:
        """F(p^-1) = -1/Theta(p) and F(p) = 1/Theta(p), both ascending on the window."""
        inverse = self.product_service.theta_inverse(order, window)
        at_pinv = self.bo_correlator("one-pinv", order, window)
        at_p = self.bo_correlator("one-p", order, window)
        mismatches = series_mismatches(at_pinv.mismatches(-inverse), "one_point_pinv")
        mismatches += series_mismatches(at_p.mismatches(inverse), "one_point_p")
        return IdentityReport(
            check="one_point",
            params={"qmax": order, "window": window.as_list()},
            mismatches=mismatches,
            series={"correlator": at_pinv, "theta_inverse": inverse},
        )

    def two_point_check(self, order: int, window: Window) -> IdentityReport:
        correlator = self.bo_correlator("two", order, window)
        closed = self.two_point_closed_form(order, window)
        return IdentityReport(
            check="two_point",
            params={"qmax": order, "window": window.as_list()},
            mismatches=series_mismatches(correlator.mismatches(closed), "two_point"),
            series={"correlator": correlator, "closed_form": closed},
        )

    def proof_chain_eq3(self, order: int, window: Window) -> IdentityReport:
        """p^(-1/2) F(p^-1) / prod(1 - q^m) reproduces the product side of identity 3."""
        # p^(-1/2) lowers the valid top by one half-step
        correlator = self.bo_correlator("one-pinv", order, Window(window.low, window.high + 1))
        chained = (correlator.shift_p(-1) * self.product_service.partition_series(order)).truncate(window.high)
        target = self.identity_service.rhs(3, order, window)
        return IdentityReport(
            check="proof_chain_3",
            mismatches=series_mismatches(chained.mismatches(target), "proof_chain_3"),
        )

    def proof_chain_eq4(self, order: int, window: Window) -> IdentityReport:
        """1 - F(p, p^-1) equals the braces of identity 4."""
        chained = QSeries.one(order) - self.bo_correlator("two", order, window)
        target = self.identity_service.eq4_braces(order, window.high)
        return IdentityReport(
            check="proof_chain_4",
            mismatches=series_mismatches(chained.mismatches(target), "proof_chain_4"),
        )

    def log_deriv_theta_check(self, order: int, window: Window) -> IdentityReport:
        """
        p d/dp log Theta against its closed form.

        The left side is (p dTheta/dp) * Theta^-1; Theta's q^d coefficient reaches
        p^(-d-1/2), so the inverse is taken 2N + 1 half-steps above the window top.
        """
        reach = Window(min(window.low, -2 * order), window.high + 2 * order + 1)
        derivative = self.product_service.theta_exact(order).euler_derivative_p()
        left = (derivative * self.product_service.theta_inverse(order, reach)).truncate(window.high)
        right = self.log_deriv_closed_form(order, window)
        mismatches = series_mismatches(left.mismatches(right), "log_derivative")

        # The q-dependent part is odd under p -> 1/p.
        for d, row in sorted(_divisor_rows(order, lambda k: [(2 * k, -1), (-2 * k, 1)]).items()):
            exact = PSeries(row)
            for e, x, y in exact.substitute_inverse().mismatches(-exact):
                mismatches.append(Mismatch.at(x, y, check="antisymmetry", q=d, p=e))
        return IdentityReport(
            check="log_derivative",
            params={"qmax": order, "window": window.as_list()},
            mismatches=mismatches,
            series={"lhs": left, "rhs": right},
        )

    def run(self, point: str, order: int, window: Window) -> IdentityReport:
        """
        The full suite for one correlator family.

        `one` runs the one-point check, the identity 3 chain and the log-derivative
        of theta; `two` runs the closed form and the identity 4 chain.
        """
        started = time.perf_counter()
        if point == "one":
            parts: List[IdentityReport] = [
                self.one_point_check(order, window),
                self.proof_chain_eq3(order, window),
                self.log_deriv_theta_check(order, window),
            ]
        elif point == "two":
            parts = [self.two_point_check(order, window), self.proof_chain_eq4(order, window)]
        else:
            raise ValueError(f"Unknown point {point!r}; expected 'one' or 'two'.")
        head = IdentityReport(check=f"bo-{point}", params={"point": point, "qmax": order,
                                                         "window": window.as_list()})
        report = head.merged(parts)
        report.timings["total"] = time.perf_counter() - started
        logger.info("Bloch-Okounkov %s-point to q^%d: %s (%d mismatches)", point, order, report.status,
                    len(report.mismatches))
        return report
