import time
from typing import Dict, List, Optional

from src.config.settings import settings
from src.domain.fock.models.coefficient import FormalCoefficient
from src.domain.fock.models.fock_vector import FockVector
from src.domain.fock.models.maya_state import MayaState, state_label
from src.domain.fock.models.operators import EnergyOp, Gamma, QPowerH
from src.domain.fock.services.operator_service import OperatorService
from src.domain.fock.services.trace_service import TraceService
from src.domain.identities.models.report import (
    IdentityReport,
    Mismatch,
    graded_mismatches,
    series_mismatches,
)
from src.domain.partitions.models.partition import LegTriple, Partition, partitions_up_to
from src.domain.schur.models.varlist import VarList
from src.domain.schur.services.vertex_service import VertexService
from src.domain.series.models.agraded import AGradedSeries
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import Window
from src.domain.series.services.product_service import ProductService
from src.utils.logger import Logger

logger = Logger(__name__)

CHECKS = (
    "anticommutation",
    "adjointness",
    "matrix-coeff",
    "commutation",
    "field-product",
    "traces",
    "lemma51",
    "lemma52",
)

# Largest q-order and doubled p-top at which lemma traces are also taken in direct order.
DESK_ORDER = 2
DESK_TOP = 4


def entry_mismatches(check: str, entry: str, left: FormalCoefficient, right: FormalCoefficient,
                     top: int, a_range: Optional[range] = None) -> List[Mismatch]:
    """Compares two matrix entries exactly; disagreements are listed by their expansions."""
    if a_range is not None:
        left = left.restrict_a(a_range.start, a_range.stop - 1)
        right = right.restrict_a(a_range.start, a_range.stop - 1)
    if left == right:
        return []
    rows = [
        Mismatch.at(x, y, check=check, entry=entry, a=m[0], u=m[1], q=m[2], p=e)
        for m, e, x, y in left.mismatches(right, top)
    ]
    return rows or [Mismatch.at(left, right, check=check, entry=entry)]


def vector_mismatches(check: str, entry: str, left: FockVector, right: FockVector) -> List[Mismatch]:
    out = []
    for state in sorted(set(left.states()) | set(right.states()), key=MayaState.sort_key):
        x, y = left.coefficient(state), right.coefficient(state)
        if x != y:
            out.append(Mismatch.at(x, y, check=check, entry=f"{entry} at {state_label(state)}"))
    return out


class FockCheckService:
    """Verifications of the fermionic Fock space machinery and of the two trace lemmas."""

    def __init__(self, operator_service: OperatorService, trace_service: TraceService,
                 vertex_service: VertexService, product_service: ProductService):
        self.operator_service = operator_service
        self.trace_service = trace_service
        self.vertex_service = vertex_service
        self.product_service = product_service

    @property
    def schur_service(self):
        return self.operator_service.schur_service

    def run(self, check: str, emax: int, order: int, window: Window, radius: int) -> IdentityReport:
        """Dispatches one named check."""
        started = time.perf_counter()
        if check == "anticommutation":
            report = self.anticommutation_check(emax)
        elif check == "adjointness":
            report = self.adjointness_check(emax)
        elif check == "matrix-coeff":
            report = self.matrix_coefficient_check(emax)
        elif check == "commutation":
            report = self.commutation_checks(emax, window, radius)
        elif check == "field-product":
            report = self.field_product_check(emax, radius)
        elif check == "traces":
            report = self.trace_checks(order, window, radius)
        elif check == "lemma51":
            report = self.lemma51_check(order, window, radius)
        elif check == "lemma52":
            report = self.lemma52_check(order, window, radius)
        else:
            raise ValueError(f"Unknown Fock check {check!r}; expected one of {CHECKS}.")
        report.timings["total"] = time.perf_counter() - started
        logger.info("Fock check %s: %s (%d mismatches, %.2fs)", check, report.status,
                    len(report.mismatches), report.timings["total"])
        return report

    # -- fermions -----------------------------------------------------

    def anticommutation_check(self, emax: int = 6, kmax: int = 13) -> IdentityReport:
        """{psi_j, psi*_k} = delta_jk and {psi_j, psi_k} = {psi*_j, psi*_k} = 0 for |j|, |k| <= kmax/2."""
        ops = self.operator_service
        positions = range(-kmax, kmax + 1, 2)
        mismatches: List[Mismatch] = []
        for lam in partitions_up_to(emax):
            v = FockVector.from_partition(lam)
            for j in positions:
                for k in positions:
                    mixed = ops.apply_psi(j, ops.apply_psi_star(k, v)) + ops.apply_psi_star(k, ops.apply_psi(j, v))
                    expected = v if j == k else FockVector.zero()
                    mismatches += vector_mismatches("psi_psi_star", f"{{psi_{j}/2, psi*_{k}/2}} v_{lam}",
                                                    mixed, expected)
                    both = ops.apply_psi(j, ops.apply_psi(k, v)) + ops.apply_psi(k, ops.apply_psi(j, v))
                    mismatches += vector_mismatches("psi_psi", f"{{psi_{j}/2, psi_{k}/2}} v_{lam}",
                                                    both, FockVector.zero())
                    stars = (ops.apply_psi_star(j, ops.apply_psi_star(k, v))
                             + ops.apply_psi_star(k, ops.apply_psi_star(j, v)))
                    mismatches += vector_mismatches("psi_star_psi_star", f"{{psi*_{j}/2, psi*_{k}/2}} v_{lam}",
                                                    stars, FockVector.zero())
        return IdentityReport(check="anticommutation", params={"emax": emax, "kmax": f"{kmax}/2"},
                              mismatches=mismatches)

    def adjointness_check(self, emax: int = 6, kmax: int = 13) -> IdentityReport:
        """psi_k* = psi*_k, alpha_n* = alpha_-n and Gamma_-* = Gamma_+, entry by entry."""
        ops = self.operator_service
        mismatches: List[Mismatch] = []
        partitions = partitions_up_to(emax)
        for lam in partitions:
            v = FockVector.from_partition(lam)
            home = MayaState.from_partition(lam)
            for k in range(-kmax, kmax + 1, 2):
                for state, c in ops.apply_psi_star(k, v).items():
                    back = ops.apply_psi(k, FockVector.basis(state)).coefficient(home)
                    mismatches += entry_mismatches("psi", f"(psi_{k}/2 {state_label(state)}, v_{lam})", back, c, 0)

        images = {}
        for mu in partitions:
            images[("raise", mu)] = ops.apply_gamma(Gamma.minus(), FockVector.from_partition(mu), emax)
            images[("lower", mu)] = ops.apply_gamma(Gamma.plus(), FockVector.from_partition(mu))
        for n in range(1, emax + 1):
            downs = {lam: ops.apply_alpha(n, FockVector.from_partition(lam)) for lam in partitions if lam.size >= n}
            for mu in partitions:
                up = ops.apply_alpha(-n, FockVector.from_partition(mu))
                for lam in partitions:
                    if lam.size != mu.size + n:
                        continue
                    down = downs[lam]
                    mismatches += entry_mismatches(
                        "alpha", f"n={n} ({lam}, {mu})",
                        up.coefficient(MayaState.from_partition(lam)),
                        down.coefficient(MayaState.from_partition(mu)), 0,
                    )
        for mu in partitions:
            for lam in partitions:
                left = images[("raise", mu)].coefficient(MayaState.from_partition(lam))
                right = images[("lower", lam)].coefficient(MayaState.from_partition(mu))
                mismatches += entry_mismatches("gamma", f"({lam}, {mu})", left, right, 2 * emax)
        return IdentityReport(check="adjointness", params={"emax": emax}, mismatches=mismatches)

    def matrix_coefficient_check(self, emax: int = 5, variables: Optional[VarList] = None) -> IdentityReport:
        """(v_lambda, Gamma_-(x) v_mu) = (v_mu, Gamma_+(x) v_lambda) = s_{lambda/mu}(x)."""
        variables = variables or VarList.principal()
        ops = self.operator_service
        partitions = partitions_up_to(emax)
        mismatches: List[Mismatch] = []
        raised = {mu: ops.apply_gamma(Gamma.minus(variables=variables), FockVector.from_partition(mu), emax)
                  for mu in partitions}
        lowered = {lam: ops.apply_gamma(Gamma.plus(variables=variables), FockVector.from_partition(lam))
                   for lam in partitions}
        for lam in partitions:
            for mu in partitions:
                expected = FormalCoefficient.scalar(self.schur_service.skew_schur_exact(lam, mu, variables))
                label = f"s_{lam}/{mu}"
                mismatches += entry_mismatches(
                    "gamma_minus", label, raised[mu].coefficient(MayaState.from_partition(lam)), expected, 2 * emax
                )
                mismatches += entry_mismatches(
                    "gamma_plus", label, lowered[lam].coefficient(MayaState.from_partition(mu)), expected, 2 * emax
                )
        return IdentityReport(check="matrix-coeff", params={"emax": emax, "variables": str(variables)},
                              mismatches=mismatches)

    # -- commutation relations ----------------------------------------

    def commutation_checks(self, emax: int, window: Window, radius: int) -> IdentityReport:
        """
        Gamma_+ Gamma_- = M(p) Gamma_- Gamma_+, Gamma_+(u p^-rho) E = (1 - u/a) E Gamma_+(u p^-rho),
        E Gamma_-(u p^-rho) = (1 - a u) Gamma_- E and Gamma_(+-)(x) q^H = q^H Gamma_(+-)(q^(+-1) x),
        on all basis pairs of energy <= emax.

        Raises:
            ValueError: If emax < 2.
        """
        if emax < 2:
            raise ValueError("Commutation checks need emax >= 2.")
        ops = self.operator_service
        top = window.high
        partitions = partitions_up_to(emax)
        states = {lam: MayaState.from_partition(lam) for lam in partitions}
        mismatches: List[Mismatch] = []

        # Gamma_+ Gamma_- against M(p) Gamma_- Gamma_+, on the p-window.
        cutoff = emax + (top + 1) // 2 + settings.CUTOFF_MARGIN
        for mu in partitions:
            v = FockVector.from_partition(mu)
            left = ops.apply_gamma(Gamma.plus(), ops.apply_gamma(Gamma.minus(), v, cutoff))
            right = ops.apply_gamma(Gamma.minus(), ops.apply_gamma(Gamma.plus(), v), emax)
            for lam in partitions:
                x = left.coefficient(states[lam]).get((0, 0, 0))
                y = right.coefficient(states[lam]).get((0, 0, 0))
                lhs = x.expand(top)
                rhs = self.vertex_service.times_macmahon(y, top) if not y.is_zero() else PSeries.zero(top)
                mismatches += [
                    Mismatch.at(a, b, check="gamma_gamma", entry=f"({lam}, {mu})", p=e)
                    for e, a, b in lhs.mismatches(rhs)
                ]
        logger.debug("Gamma+Gamma- relation checked with cutoff %d against M(p) to p^%d/2", cutoff, top)

        u_plus = Gamma.plus(u_power=1)
        u_minus = Gamma.minus(u_power=1)
        one_minus_u_over_a = FormalCoefficient({(0, 0, 0): RationalLaurent.one(),
                                                (-1, 1, 0): RationalLaurent.constant(-1)})
        one_minus_a_u = FormalCoefficient({(0, 0, 0): RationalLaurent.one(),
                                           (1, 1, 0): RationalLaurent.constant(-1)})
        for mu in partitions:
            v = FockVector.from_partition(mu)
            # Gamma_+(u p^-rho) E(a, p)
            left = ops.apply_gamma(u_plus, ops.apply_E_a(v, radius))
            right = ops.apply_E_a(ops.apply_gamma(u_plus, v), radius).scaled(one_minus_u_over_a)
            for lam in partitions:
                mismatches += entry_mismatches(
                    "gamma_plus_E", f"({lam}, {mu})", left.coefficient(states[lam]),
                    right.coefficient(states[lam]), top, range(-radius, radius),
                )
            # E(a, p) Gamma_-(u p^-rho)
            left = ops.apply_E_a(ops.apply_gamma(u_minus, v, emax + radius), radius)
            lowered = ops.apply_E_a(v, radius).truncate_energy(emax)
            right = ops.apply_gamma(u_minus, lowered, emax).scaled(one_minus_a_u)
            for lam in partitions:
                mismatches += entry_mismatches(
                    "E_gamma_minus", f"({lam}, {mu})", left.coefficient(states[lam]),
                    right.coefficient(states[lam]), top, range(-radius + 1, radius + 1),
                )
            # Gamma_(+-) q^H
            graded = ops.apply_qH(v)
            pairs = (
                ("gamma_plus_qH", ops.apply_gamma(Gamma.plus(), graded),
                 ops.apply_qH(ops.apply_gamma(Gamma.plus(q_power=1), v))),
                ("gamma_minus_qH", ops.apply_gamma(Gamma.minus(), graded, emax),
                 ops.apply_qH(ops.apply_gamma(Gamma.minus(q_power=-1), v, emax))),
            )
            for name, left, right in pairs:
                for lam in partitions:
                    mismatches += entry_mismatches(name, f"({lam}, {mu})", left.coefficient(states[lam]),
                                                   right.coefficient(states[lam]), top)
        return IdentityReport(
            check="commutation",
            params={"emax": emax, "window": window.as_list(), "awin": radius, "cutoff": cutoff},
            mismatches=mismatches,
        )

    def field_product_check(self, emax: int = 5, radius: int = 2) -> IdentityReport:
        """
        E(a, p) = psi(a^-1 p^(1/2)) psi*(a^-1 p^(-1/2)) on states of energy <= emax.

        The right side is the double sum of z^j w^-k psi_j psi*_k over |j|, |k| <= K; on
        these states every deeper position is occupied, so the diagonal remainder is
        the geometric tail sum_(k < -K) p^k, held in rational form.
        """
        ops = self.operator_service
        bound = 2 * (emax + radius) + 1
        positions = range(-bound, bound + 1, 2)
        tail = RationalLaurent.descending_tail(-bound - 2)
        mismatches: List[Mismatch] = []
        for lam in partitions_up_to(emax):
            v = FockVector.from_partition(lam)
            left = ops.apply_E_a(v, radius)
            right = v.scaled(tail)
            for k in positions:
                removed = ops.apply_psi_star(k, v)
                if removed.is_zero():
                    continue
                for j in positions:
                    r = (k - j) // 2
                    if abs(r) > radius:
                        continue
                    weight = FormalCoefficient.monomial((r, 0, 0), RationalLaurent.monomial((j + k) // 2))
                    right = right + ops.apply_psi(j, removed).scaled(weight)
            mismatches += vector_mismatches("field_product", f"v_{lam}", left, right)
        return IdentityReport(check="field-product", params={"emax": emax, "awin": radius},
                              mismatches=mismatches)

    # -- traces -------------------------------------------------------

    def trace_checks(self, order: int, window: Window, radius: int) -> IdentityReport:
        """
        tr(q^H) = prod (1 - q^d)^-1; tr(E(a,p) q^H) has only an a^0 part, sum q^|lambda| E_0(lambda);
        E_r entries are off-diagonal; tr(Gamma_+ Gamma_- q^H) agrees in both orderings and is
        stable under a larger cutoff.
        """
        mismatches: List[Mismatch] = []
        qh = self.trace_service.graded_trace([QPowerH()], order, window)
        partitions = self.product_service.partition_series(order)
        mismatches += series_mismatches(qh.coefficient(0).mismatches(partitions), "trace_qH")

        energy = self.trace_service.graded_trace([EnergyOp(), QPowerH()], order, window, radius)
        eigen: Dict[int, RationalLaurent] = {}
        for lam in partitions_up_to(order):
            value = self.operator_service.e0_eigenvalue(MayaState.from_partition(lam))
            eigen[lam.size] = eigen[lam.size] + value if lam.size in eigen else value
        expected = AGradedSeries({0: QSeries.from_rational(order, eigen, window.high)}, radius, order)
        mismatches += graded_mismatches(energy.mismatches(expected), "trace_E")

        for r in range(-radius, radius + 1):
            if r == 0:
                continue
            for mu in partitions_up_to(order):
                image = self.operator_service.apply_E(r, FockVector.from_partition(mu))
                for state in image.states():
                    if state.charge != 0 or state.energy != mu.size - r:
                        mismatches.append(Mismatch.at(image.coefficient(state), 0, check="E_r_grading",
                                                      entry=f"E_{r} v_{mu} -> {state_label(state)}"))

        chain = [Gamma.plus(), Gamma.minus(), QPowerH()]
        direct = self.trace_service.graded_trace(chain, order, window)
        normal = self.trace_service.graded_trace(chain, order, window, ordering="normal")
        mismatches += graded_mismatches(direct.mismatches(normal), "gamma_trace_orderings")
        cutoff = self.trace_service.direct_cutoff(order, window, 0)
        wider = self.trace_service.graded_trace(chain, order, window, cutoff=cutoff + 2)
        mismatches += graded_mismatches(direct.mismatches(wider), "cutoff_stability")
        return IdentityReport(
            check="traces",
            params={"qmax": order, "window": window.as_list(), "awin": radius, "cutoff": cutoff},
            mismatches=mismatches,
            series={"trace_qH": qh.coefficient(0), "trace_gamma": direct.coefficient(0)},
        )

    def ordering_cross_check(self, chain: List, order: int, window: Window, radius: int,
                             check: str) -> List[Mismatch]:
        """Direct against normal ordering, capped at q^2, p^2 and |a| <= 1 so the direct cutoff stays small."""
        small_order = min(order, DESK_ORDER)
        top = min(window.high, DESK_TOP)
        small = Window(min(window.low, top), top)
        small_radius = min(radius, 1)
        direct = self.trace_service.graded_trace(chain, small_order, small, small_radius)
        normal = self.trace_service.graded_trace(chain, small_order, small, small_radius, "normal")
        return graded_mismatches(direct.mismatches(normal), check)

    # -- the two lemmas -----------------------------------------------

    def eq5_direct_sum(self, order: int, window: Window) -> QSeries:
        """sum q^|lambda| p^||lambda||^2 V_{lambda lambda' 0} V_{lambda box 0} / V_{lambda 0 0}."""
        rows: Dict[int, RationalLaurent] = {}
        for lam in partitions_up_to(order):
            vertex = self.vertex_service.vertex_rational(LegTriple(lam, lam.conjugate(), Partition()))
            term = (vertex * self.schur_service.ratio_box(lam)).shift(2 * lam.norm2 - 1)
            rows[lam.size] = rows[lam.size] + term if lam.size in rows else term
        return self.times_macmahon(rows, order, window.high)

    def times_macmahon(self, rows: Dict[int, RationalLaurent], order: int, top: int) -> QSeries:
        """M(p) * sum_d rows[d] q^d, exact up to p^(top/2)."""
        lowest = min((v.numerator.valuation() for v in rows.values() if not v.is_zero()), default=0)
        macmahon = self.product_service.macmahon(top - min(lowest, 0))
        return (QSeries.from_rational(order, rows, top) * macmahon).truncate(top)

    def lemma51_check(self, order: int, window: Window, radius: int = 1) -> IdentityReport:
        """
        The identity 5 left side three ways: the direct vertex sum, -p^(-1/2) tr(E_0 Gamma_+ Gamma_- q^H)
        and -p^(-1/2) times the a^0 part of tr(E(a,p) Gamma_+ Gamma_- q^H).
        """
        direct = self.eq5_direct_sum(order, window)
        raised = Window(window.low + 1, window.high + 1)
        scale = PSeries.monomial(-1, -1)
        e0 = self.trace_service.graded_trace(
            [EnergyOp(0), Gamma.plus(), Gamma.minus(), QPowerH()], order, raised, 0, "normal"
        )
        ea = self.trace_service.graded_trace(
            [EnergyOp(), Gamma.plus(), Gamma.minus(), QPowerH()], order, raised, radius, "normal"
        )
        via_e0 = (e0.coefficient(0) * scale).truncate(window.high)
        via_ea = (ea.coefficient(0) * scale).truncate(window.high)
        mismatches = series_mismatches(direct.mismatches(via_e0), "direct_vs_E0")
        mismatches += series_mismatches(via_e0.mismatches(via_ea), "E0_vs_Ea")
        mismatches += self.ordering_cross_check(
            [EnergyOp(0), Gamma.plus(), Gamma.minus(), QPowerH()], order, raised, 0, "E0_trace_orderings"
        )
        return IdentityReport(
            check="lemma51",
            params={"qmax": order, "window": window.as_list(), "awin": radius},
            mismatches=mismatches,
            series={"direct": direct, "trace_E0": via_e0, "trace_Ea": via_ea},
        )

    def lemma52_closed_form(self, order: int, window: Window, radius: int) -> AGradedSeries:
        """
        M(p)/(p^(1/2) - p^(-1/2)) * prod_m (1 - q^m/a)(1 - q^(m-1) a)(1 - q^m) M(p, q^m)
        / ((1 - p q^m)(1 - p^-1 q^m)), with 1/(p^(1/2) - p^(-1/2)) = -p^(1/2)/(1 - p).
        """
        floor = min(window.low, -2 * order)
        elliptic = self.product_service.elliptic_product(order, Window(floor, window.high))
        reach = window.high - floor
        prefactor = RationalLaurent(PSeries.monomial(1, -1), {1: 1}).expand(reach)
        prefactor = prefactor * self.product_service.macmahon(reach)
        triple = self.product_service.jacobi_triple_product_a(order, radius).product
        return (triple * (elliptic * prefactor)).truncate(window.high)

    def lemma52_check(self, order: int, window: Window, radius: int) -> IdentityReport:
        """
        tr(E(a,p) Gamma_+ Gamma_- q^H) against its product formula, together with the steps that
        lead there: the first cyclic step, Gamma_(+-)(q^k p^-rho) = Id mod q^k, the triple product
        and the recovery of the identity 5 product side.
        """
        trace_chain = [EnergyOp(), Gamma.plus(), Gamma.minus(), QPowerH()]
        lhs = self.trace_service.graded_trace(trace_chain, order, window, radius, "normal")
        closed = self.lemma52_closed_form(order, window, radius)
        mismatches = graded_mismatches(lhs.mismatches(closed), "closed_form")
        mismatches += self.ordering_cross_check(trace_chain, order, window, radius, "Ea_trace_orderings")

        mismatches += self._cyclic_step(lhs, order, window, radius)
        mismatches += self._identity_mod_q(order)

        triple = self.product_service.jacobi_triple_product_a(order, radius)
        mismatches += graded_mismatches(triple.mismatches, "triple_product")
        mismatches += series_mismatches(triple.product.coefficient(0).mismatches(QSeries.one(order)),
                                        "triple_product_a0")

        recovered = closed.coefficient(0).shift_p(-1) * -1
        floor = min(window.low, -2 * order)
        product_side = self.product_service.elliptic_product(order, Window(floor, window.high))
        product_side = product_side * RationalLaurent(PSeries.one(), {1: 1}).expand(window.high - floor)
        product_side = product_side * self.product_service.macmahon(window.high - floor)
        mismatches += series_mismatches(recovered.mismatches(product_side, window.high - 1), "eq5_recovery")
        return IdentityReport(
            check="lemma52",
            params={"qmax": order, "window": window.as_list(), "awin": radius},
            mismatches=mismatches,
            series={"trace": lhs, "closed_form": closed},
        )

    def _cyclic_step(self, lhs: AGradedSeries, order: int, window: Window, radius: int) -> List[Mismatch]:
        """tr(E G+ G- q^H) = M(p)(1 - q/a) tr(E G+(q p^-rho) G- q^H) on a in [-R, R-1]."""
        shifted = self.trace_service.graded_trace(
            [EnergyOp(), Gamma.plus(q_power=1), Gamma.minus(), QPowerH()], order, window, radius, "normal"
        )
        valuations = [shifted.coefficient(a).valuation() for a in shifted.exponents()]
        lowest = min((v for v in valuations if v is not None), default=0)
        macmahon = self.product_service.macmahon(window.high - min(lowest, 0))
        mismatches: List[Mismatch] = []
        for a in range(-radius, radius):
            step = shifted.coefficient(a) - shifted.coefficient(a + 1).shift_q(1)
            right = (step * macmahon).truncate(window.high)
            rows = lhs.coefficient(a).mismatches(right)
            mismatches += [Mismatch.at(x, y, check="cyclic_step", a=a, q=d, p=e) for d, e, x, y in rows]
        return mismatches

    def _identity_mod_q(self, order: int) -> List[Mismatch]:
        """Gamma_(+-)(q^k p^-rho) v_mu = v_mu + O(q^k) for k = 1..N and |mu| <= N."""
        ops = self.operator_service
        mismatches: List[Mismatch] = []
        for k in range(1, order + 1):
            for mu in partitions_up_to(order):
                home = MayaState.from_partition(mu)
                v = FockVector.from_partition(mu)
                images = (
                    ("G+", ops.apply_gamma(Gamma.plus(q_power=k), v)),
                    ("G-", ops.apply_gamma(Gamma.minus(q_power=k), v, order)),
                )
                for name, image in images:
                    for state, c in image.items():
                        if state == home:
                            if c != FormalCoefficient.one():
                                mismatches.append(Mismatch.at(c, 1, check="identity_mod_q",
                                                              entry=f"{name}(q^{k}) v_{mu}"))
                            continue
                        low = [m for m in c if m[2] < k]
                        if low:
                            mismatches.append(Mismatch.at(c, 0, check="identity_mod_q",
                                                          entry=f"{name}(q^{k}) v_{mu} -> {state_label(state)}"))
        return mismatches
