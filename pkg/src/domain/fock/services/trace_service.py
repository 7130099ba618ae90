from typing import Dict, List, Optional, Sequence, Tuple

from src.config.settings import settings
from src.domain.fock.models.coefficient import FormalCoefficient
from src.domain.fock.models.fock_vector import FockVector
from src.domain.fock.models.maya_state import MayaState
from src.domain.fock.models.operators import EnergyOp, Gamma, Operator, QPowerH, chain_label
from src.domain.partitions.models.partition import Partition, partitions_up_to
from src.domain.fock.services.operator_service import OperatorService
from src.domain.schur.services.schur_service import SchurService
from src.domain.series.models.agraded import AGradedSeries
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import Window
from src.domain.series.repositories.series_cache import SeriesCache
from src.domain.series.services.product_service import ProductService, macmahon_factors
from src.utils.exceptions import CutoffError
from src.utils.logger import Logger
from src.utils.parallel import resolve_jobs, ordered_map

logger = Logger(__name__)

ORDERINGS = ("direct", "normal")

EntryTask = Tuple[Tuple[Operator, ...], Tuple[Optional[int], ...], int, int, Partition]

_worker_service: Optional[OperatorService] = None


def _trace_entry(task: EntryTask) -> FormalCoefficient:
    """Worker-process entry point; each process keeps its own operator cache."""
    global _worker_service
    if _worker_service is None:
        cache = SeriesCache()
        _worker_service = OperatorService(SchurService(cache), cache)
    return diagonal_entry(_worker_service, task)


def diagonal_entry(service: OperatorService, task: EntryTask) -> FormalCoefficient:
    """q^|lambda| (v_lambda, O v_lambda), cut at the q-order."""
    chain, cutoffs, radius, order, lam = task
    size = lam.size
    image = service.apply_chain(chain, FockVector.from_partition(lam), cutoffs, radius, order - size)
    return image.coefficient(MayaState.from_partition(lam)).times_monomial((0, 0, size))


def normal_order(chain: Sequence[Operator]) -> Tuple[List[Operator], List[int]]:
    """
    Moves every Gamma_+ to the right of adjacent Gamma_- factors.

    Gamma_+(q^s p^-rho) Gamma_-(q^t p^-rho) = M(p, q^(s+t)) Gamma_- Gamma_+; the q-powers
    s + t of the collected MacMahon factors are returned with the rewritten chain.

    Raises:
        ValueError: If a swapped pair is not of that form, or if a Gamma_+ stays to the
            left of a Gamma_- behind another operator.
    """
    ops = list(chain)
    collected: List[int] = []
    swapped = True
    while swapped:
        swapped = False
        for i in range(len(ops) - 1):
            left, right = ops[i], ops[i + 1]
            if isinstance(left, Gamma) and isinstance(right, Gamma) and left.sign > 0 > right.sign:
                if not (left.is_principal() and right.is_principal()) or left.u_power or right.u_power:
                    raise ValueError(f"Cannot normal order {left} {right}: only q^k p^-rho arguments commute.")
                collected.append(left.q_power + right.q_power)
                ops[i], ops[i + 1] = right, left
                swapped = True
    seen_plus = False
    for op in ops:
        if isinstance(op, Gamma):
            if op.sign > 0:
                seen_plus = True
            elif seen_plus:
                raise ValueError(f"Normal ordering of {chain_label(chain)} leaves a Gamma_+ left of a Gamma_-.")
    return ops, sorted(collected)


class TraceService:
    """Graded traces sum_lambda q^|lambda| (v_lambda, O v_lambda) of operator chains ending in q^H."""

    def __init__(self, operator_service: OperatorService, product_service: ProductService):
        self.operator_service = operator_service
        self.product_service = product_service

    @staticmethod
    def direct_cutoff(order: int, window: Window, radius: int) -> int:
        """E_int = 2N + ceil(P) + R + margin, P the window top in p units."""
        return 2 * order + (window.high + 1) // 2 + radius + settings.CUTOFF_MARGIN

    @staticmethod
    def _normal_cutoffs(ops: Sequence[Operator], order: int, radius: int) -> List[Optional[int]]:
        """Highest energy a state may reach right after each Gamma_- and still return to |lambda| <= N."""
        cutoffs: List[Optional[int]] = []
        lowering = 0
        for op in ops:
            if isinstance(op, EnergyOp):
                lowering += radius if op.r is None else max(op.r, 0)
            cutoffs.append(order + lowering if isinstance(op, Gamma) and op.sign < 0 else None)
        return cutoffs

    def prefactor(self, q_powers: Sequence[int], order: int, top: int) -> QSeries:
        """prod_t M(p, q^t), exact up to p^(top/2)."""
        result = QSeries.one(order)
        for t in q_powers:
            if t == 0:
                result = result * self.product_service.macmahon(top)
            else:
                result = result * self.product_service.euler_product(
                    macmahon_factors(top, q_exp=t), order, Window(0, max(top, 0))
                )
        return result.truncate(top)

    def graded_trace(self, chain: Sequence[Operator], order: int, window: Window, radius: int = 0,
                     ordering: str = "direct", cutoff: Optional[int] = None,
                     jobs: Optional[int] = None) -> AGradedSeries:
        """
        Computes the graded trace of a chain whose last factor is q^H.

        Args:
            chain: Operators, leftmost first; the last one must be q^H.
            order: The q-order N.
            window: p-window; entries are exact rationals and only expanded at the end.
            radius: a-window radius for E(a, p).
            ordering: "direct" applies the chain with a derived energy cutoff,
                "normal" first commutes Gamma_+ past Gamma_- and needs no window-dependent cutoff.
            cutoff: Overrides the derived direct-ordering cutoff.
            jobs: Worker processes for the per-lambda entries.

        Returns:
            AGradedSeries: The trace, truncated at the window top.

        Raises:
            ValueError: For a malformed chain or an unknown ordering.
            CutoffError: If an explicit cutoff is below the q-order.
        """
        if ordering not in ORDERINGS:
            raise ValueError(f"Unknown ordering {ordering!r}; expected one of {ORDERINGS}.")
        if not chain or not isinstance(chain[-1], QPowerH):
            raise ValueError("A graded trace needs q^H as the last factor of the chain.")
        ops = list(chain[:-1])
        if any(isinstance(op, QPowerH) for op in ops):
            raise ValueError("q^H may appear only once, at the end of the chain.")

        q_powers: List[int] = []
        if ordering == "normal":
            ops, q_powers = normal_order(ops)
            cutoffs = self._normal_cutoffs(ops, order, radius)
        else:
            energy_cutoff = cutoff if cutoff is not None else self.direct_cutoff(order, window, radius)
            if energy_cutoff < order:
                raise CutoffError(f"cutoff too small: {energy_cutoff} is below the q-order {order}.")
            cutoffs = [energy_cutoff if isinstance(op, Gamma) and op.sign < 0 else None for op in ops]

        tasks: List[EntryTask] = [
            (tuple(ops), tuple(cutoffs), radius, order, lam) for lam in partitions_up_to(order)
        ]
        if resolve_jobs(jobs) > 1:
            entries = ordered_map(_trace_entry, tasks, jobs)
        else:
            entries = [diagonal_entry(self.operator_service, task) for task in tasks]
        total = FormalCoefficient.zero()
        for entry in entries:
            total = total + entry
        logger.debug("Trace of %s to q^%d (%s): %d monomials", chain_label(chain), order, ordering,
                     len(list(total)))
        return self._to_graded(total, q_powers, order, window, radius)

    def _to_graded(self, total: FormalCoefficient, q_powers: Sequence[int], order: int, window: Window,
                   radius: int) -> AGradedSeries:
        rows: Dict[int, Dict[int, RationalLaurent]] = {}
        for (a, u, q), value in total.items():
            if u:
                raise ValueError("Traces are taken with the formal parameter u set to zero powers only.")
            rows.setdefault(a, {})[q] = value
        valuations = [v.numerator.valuation() for row in rows.values() for v in row.values()]
        lowest = min(valuations, default=0)
        factor = self.prefactor(q_powers, order, window.high - min(lowest, 0)) if q_powers else None
        terms = {}
        for a, row in rows.items():
            series = QSeries.from_rational(order, row, window.high)
            terms[a] = (series * factor).truncate(window.high) if factor is not None else series
        return AGradedSeries(terms, radius, order)
