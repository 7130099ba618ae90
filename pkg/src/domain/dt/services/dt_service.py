import time
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.domain.dt.models.dt_case import DtCase
from src.domain.dt.services.jacobi_forms import g2_series, wp_series
from src.domain.identities.models.report import IdentityReport, series_mismatches
from src.domain.identities.services.identity_service import IdentityService, lambda_term
from src.domain.partitions.models.partition import partitions_up_to
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.rational_laurent import RationalLaurent, half_power_difference, one_minus
from src.domain.series.models.window import Window
from src.domain.series.services.product_service import (
    Factor,
    ProductService,
    macmahon_factors,
    partition_factors,
)
from src.utils.logger import Logger

logger = Logger(__name__)


def half_power_difference_power(k: int) -> RationalLaurent:
    """(p^(1/2) - p^(-1/2))^k; negative powers are the ascending rational form (-p^(1/2)/(1-p))^-k."""
    return half_power_difference().power(k)


def one_minus_p_power(k: int) -> RationalLaurent:
    return RationalLaurent(one_minus(1)).power(k)


def closed_form_shape(case: DtCase) -> Tuple[int, int]:
    """(power of p^(1/2) - p^(-1/2), power of M(p)) in front of the product of each case."""
    g = case.g
    return {
        "F": (0, 0),
        "BF": (2 * g - 2, 1 - 2 * g),
        "Nfib": (0, 1),
        "BN": (2 * g - 2, 2 - 2 * g),
        "BpF": (2 * g, -2 * g),
    }[case.case]


class DtService:
    """Donaldson-Thomas series of the elliptic fibration, in closed form and as vertex sums."""

    def __init__(self, product_service: ProductService, identity_service: IdentityService):
        self.product_service = product_service
        self.identity_service = identity_service

    @property
    def vertex_service(self):
        return self.identity_service.vertex_service

    def scaled(self, body: QSeries, prefactor: RationalLaurent, macmahon_power: int, top: int) -> QSeries:
        """
        prefactor * M(p)^k * body, exact up to p^(top/2).

        The body must be known up to `top` plus whatever the prefactor's negative
        valuation costs; the prefactor is expanded as far as the body's valuation needs.
        """
        v_pre = prefactor.numerator.valuation() or 0
        v_body = body.valuation()
        reach = top - min(v_body if v_body is not None else 0, 0) + max(0, -v_pre)
        factor = prefactor.expand(reach)
        if macmahon_power:
            factor = factor * self.product_service.macmahon(reach).power(macmahon_power, reach)
        return (body * factor).truncate(top)

    def _body(self, case: DtCase, order: int, window: Window) -> QSeries:
        products = self.product_service
        if case.case == "F":
            return products.partition_series(order)
        if case.case == "BF":
            factors: List[Factor] = []
            for d in range(1, order + 1):
                factors += [(0, d, 1), (2, d, -1), (-2, d, -1)]
            return products.euler_product(factors, order, window)
        if case.case == "Nfib":
            factors = partition_factors(order)
            for d in range(1, order + 1):
                factors += macmahon_factors(window.high, q_exp=d)
            return products.euler_product(factors, order, window)
        if case.case == "BN":
            return products.elliptic_product(order, window)
        braces = self.identity_service.eq4_braces(order, window.high)
        return (braces * products.partition_series(order)).truncate(window.high)

    def dt_series(self, case: DtCase, order: int, window: Window) -> QSeries:
        """
        The closed-form series of a case.

        Args:
            case: The curve class.
            order: The q-order N.
            window: p-window; negative genus-dependent prefactors are expanded ascending.

        Returns:
            QSeries: The series truncated at the window top.
        """
        half, mac = closed_form_shape(case)
        prefactor = half_power_difference_power(half)
        slack = max(0, -(prefactor.numerator.valuation() or 0))
        body = self._body(case, order, Window(window.low, window.high + slack))
        result = self.scaled(body, prefactor, mac, window.high)
        logger.debug("DT series %s to q^%d on %s", case, order, window)
        return result

    def vertex_rows(self, case: DtCase, order: int) -> Tuple[Dict[int, RationalLaurent], int]:
        """
        The sum over 2D partitions of vertex terms, grouped by |lambda|, as exact
        rational rows; the second value is the power of M(p) still to be applied.
        """
        vertex = self.vertex_service
        schur = vertex.schur_service
        g = case.g
        # V_{box,0,0} = M(p) / (1 - p)
        if case.case == "F":
            term, common, mac = (lambda lam: RationalLaurent.one()), RationalLaurent.one(), 0
        elif case.case == "BF":
            term = lambda lam: schur.ratio_box(lam).shift(1 - 2 * g)
            common, mac = one_minus_p_power(2 * g - 1), 1 - 2 * g
        elif case.case == "Nfib":
            term, common, mac = (lambda lam: lambda_term(vertex, 2, lam)), RationalLaurent.one(), 1
        elif case.case == "BN":
            term = lambda lam: lambda_term(vertex, 5, lam).shift(2 - 2 * g)
            common, mac = one_minus_p_power(2 * g - 1), 2 - 2 * g
        else:
            term = lambda lam: schur.ratio_two_box(lam).shift(-2 * g)
            common, mac = one_minus_p_power(2 * g), -2 * g
        rows: Dict[int, RationalLaurent] = {}
        for lam in partitions_up_to(order):
            value = term(lam)
            rows[lam.size] = rows[lam.size] + value if lam.size in rows else value
        return {d: value * common for d, value in rows.items()}, mac

    def dt_vertex_sum(self, case: DtCase, order: int, window: Window) -> QSeries:
        rows, mac = self.vertex_rows(case, order)
        lowest = min((v.numerator.valuation() for v in rows.values() if not v.is_zero()), default=0)
        series = QSeries.from_rational(order, rows, window.high)
        if not mac:
            return series
        reach = window.high - min(lowest, 0)
        return (series * self.product_service.macmahon(reach).power(mac, reach)).truncate(window.high)

    def pinned_side(self, case: DtCase, order: int, window: Window) -> Optional[QSeries]:
        """
        The same series rebuilt from the product side of one of the four identities,
        or None for the fiber class.
        """
        identities = self.identity_service
        g = case.g
        if case.case == "Nfib":
            return identities.rhs(2, order, window)
        if case.case in ("BF", "BN"):
            identity_id = 3 if case.case == "BF" else 5
            prefactor = RationalLaurent(one_minus(1)) * half_power_difference_power(2 * g - 2)
            slack = max(0, -(prefactor.numerator.valuation() or 0))
            body = identities.rhs(identity_id, order, Window(window.low, window.high + slack))
            return self.scaled(body, prefactor, 1 - 2 * g, window.high)
        if case.case == "BpF":
            prefactor = half_power_difference_power(2 * g)
            slack = max(0, -(prefactor.numerator.valuation() or 0))
            body = identities.rhs(4, order, Window(window.low, window.high + slack))
            return self.scaled(body, prefactor, -2 * g, window.high)
        return None

    def dt_series_check(self, case: DtCase, order: int, window: Window) -> IdentityReport:
        """Closed form against the vertex sum and against the matching identity's product side."""
        closed = self.dt_series(case, order, window)
        summed = self.dt_vertex_sum(case, order, window)
        mismatches = series_mismatches(closed.mismatches(summed), "vertex_sum")
        series = {"closed_form": closed, "vertex_sum": summed}
        pinned = self.pinned_side(case, order, window)
        if pinned is not None:
            mismatches += series_mismatches(closed.mismatches(pinned), "identity_side")
        return IdentityReport(
            check=f"dt-{case.case}",
            params={"case": case.case, "genus": case.genus, "qmax": order, "window": window.as_list()},
            mismatches=mismatches,
            series=series,
        )

    # -- quotients ----------------------------------------------------

    def quotient_checks(self, order: int, window: Window, genus: int) -> IdentityReport:
        """
        DT(B+F)/DT(F) = (M/(p^1/2 - p^-1/2))^(1-2g) / Theta,
        DT(B+N)/DT(N) = (M/(p^1/2 - p^-1/2))^(1-2g) q^(1/24) / (Theta eta),
        DT(B'+F)/DT(F) = (M/(p^1/2 - p^-1/2))^(-2g') (wp + 2 G2 + 1), with g' = genus.
        """
        started = time.perf_counter()
        high = window.high
        fiber = self.dt_series(DtCase("F"), order, window)
        mismatches = []

        # Theta^-1 reaches p^(-N + 1/2) at q^N; the prefactor may cost another N.
        inv_window = Window(min(window.low, -2 * order), high + 2 * order + 2 * genus + 2)
        theta_inverse = self.product_service.theta_inverse(order, inv_window)
        prefactor = half_power_difference_power(2 * genus - 1)

        left = (self.dt_series(DtCase("BF", genus), order, window) * fiber.invert()).truncate(high)
        right = self.scaled(theta_inverse, prefactor, 1 - 2 * genus, high)
        mismatches += series_mismatches(left.mismatches(right), "section_over_fiber")

        section_nodal = self.dt_series(DtCase("BN", genus), order, window)
        # 1/DT(N) must reach as far above the top as DT(B+N) reaches below zero.
        depth = -min(section_nodal.valuation() or 0, 0)
        nodal = self.dt_series(DtCase("Nfib"), order, Window(window.low, high + depth))
        left = (section_nodal * nodal.invert()).truncate(high)
        eta_part = self.product_service.eta_series(order, -1) * QSeries.one(order).with_offset(Fraction(1, 24))
        right = self.scaled(theta_inverse * eta_part, prefactor, 1 - 2 * genus, high)
        mismatches += series_mismatches(left.mismatches(right), "section_over_nodal")

        left = (self.dt_series(DtCase("BpF", genus), order, window) * fiber.invert()).truncate(high)
        jacobi = wp_series(order, Window(window.low, high + 2 * genus)) + g2_series(order) * 2 + QSeries.one(order)
        right = self.scaled(jacobi, half_power_difference_power(2 * genus), -2 * genus, high)
        mismatches += series_mismatches(left.mismatches(right), "section_prime_over_fiber")

        report = IdentityReport(
            check="dt-quotients",
            params={"genus": genus, "qmax": order, "window": window.as_list()},
            mismatches=mismatches,
        )
        report.timings["total"] = time.perf_counter() - started
        logger.info("DT quotients g=%d to q^%d: %s (%d mismatches)", genus, order, report.status,
                    len(report.mismatches))
        return report
