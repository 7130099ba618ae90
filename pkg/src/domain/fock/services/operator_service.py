from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

from src.domain.fock.models.coefficient import FormalCoefficient
from src.domain.fock.models.fock_vector import FockVector
from src.domain.fock.models.maya_state import MayaState
from src.domain.fock.models.operators import EnergyOp, Gamma, Operator, QPowerH
from src.domain.partitions.models.partition import Partition
from src.domain.schur.services.schur_service import SchurService
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import HalfExp
from src.domain.series.repositories.series_cache import SeriesCache
from src.utils.exceptions import ChargeError, CutoffError
from src.utils.logger import Logger

logger = Logger(__name__)

Weight = Callable[[HalfExp], FormalCoefficient]


def psi_on_state(k: HalfExp, state: MayaState) -> Optional[Tuple[int, MayaState]]:
    """psi_k = k ^ (.): zero on an occupied position, otherwise sign (-1)^(#occupied above k)."""
    if state.occupied(k):
        return None
    sign = -1 if state.count_above(k) % 2 else 1
    return sign, state.inserted(k)


def psi_star_on_state(k: HalfExp, state: MayaState) -> Optional[Tuple[int, MayaState]]:
    if not state.occupied(k):
        return None
    sign = -1 if state.count_above(k) % 2 else 1
    return sign, state.removed(k)


def _check_position(k: HalfExp):
    if k % 2 == 0:
        raise ValueError(f"Fermion positions are half-integers; got doubled value {k}.")


class OperatorService:
    """
    Fermionic operators on the semi-infinite wedge.

    Bilinears sum_k w(k) psi_(k-n) psi*_k are applied by scanning the finite range of
    positions where a basis state differs from the vacuum; the vertex operators
    are exponentials of boson modes, summed grade by grade until they vanish
    (Gamma_+) or pass the energy cutoff (Gamma_-).
    """

    def __init__(self, schur_service: SchurService, cache: SeriesCache):
        self.schur_service = schur_service
        self.cache = cache

    # -- fermions -----------------------------------------------------

    def apply_psi(self, k: HalfExp, v: FockVector) -> FockVector:
        """
        Applies psi_k.

        Args:
            k: Doubled half-integer position.
            v: Input vector.

        Returns:
            FockVector: k wedged in front of every basis state.
        """
        _check_position(k)
        terms = {}
        for state, c in v.items():
            hit = psi_on_state(k, state)
            if hit is not None:
                sign, target = hit
                terms[target] = c * sign
        return FockVector(terms)

    def apply_psi_star(self, k: HalfExp, v: FockVector) -> FockVector:
        _check_position(k)
        terms = {}
        for state, c in v.items():
            hit = psi_star_on_state(k, state)
            if hit is not None:
                sign, target = hit
                terms[target] = c * sign
        return FockVector(terms)

    def _bilinear(self, v: FockVector, n: int, weight: Weight) -> FockVector:
        """sum_k weight(k) psi_(k-n) psi*_k with n != 0."""
        total = FockVector.zero()
        for state, c in v.items():
            low, high = state.span()
            terms = {}
            for k in range(low - 2 * abs(n), high + 1, 2):
                removed = psi_star_on_state(k, state)
                if removed is None:
                    continue
                added = psi_on_state(k - 2 * n, removed[1])
                if added is None:
                    continue
                target = added[1]
                value = weight(k) * (removed[0] * added[0])
                terms[target] = terms[target] + value if target in terms else value
            total = total + FockVector(terms).scaled(c)
        return total

    def apply_alpha(self, n: int, v: FockVector) -> FockVector:
        """alpha_n = sum_k psi_(k-n) psi*_k; lowers energy by n."""
        if n == 0:
            raise ValueError("alpha_0 is the charge operator; only nonzero modes are supported.")
        one = FormalCoefficient.one()
        return self._bilinear(v, n, lambda k: one)

    # -- energy operators ---------------------------------------------

    @staticmethod
    def e0_eigenvalue(state: MayaState) -> RationalLaurent:
        """
        sum over occupied k of p^k, in rational form: the finite particle/hole
        correction plus the vacuum's descending tail sum_(j>=0) p^(-1/2-j).
        """
        finite = PSeries.polynomial(
            [(k, 1) for k in state.particles] + [(k, -1) for k in state.holes]
        )
        return RationalLaurent(finite) + RationalLaurent.descending_tail(-1)

    def apply_E(self, r: int, v: FockVector) -> FockVector:
        """E_r(p) = sum_k p^(k - r/2) psi_(k-r) psi*_k; E_0 acts diagonally by its rational eigenvalue."""
        if r == 0:
            return v.map_coefficients(lambda s, c: c * self.e0_eigenvalue(s))
        return self._bilinear(v, r, lambda k: FormalCoefficient.scalar(RationalLaurent.monomial(k - r)))

    def apply_E_a(self, v: FockVector, radius: int) -> FockVector:
        """E(a, p) = sum_(|r| <= R) a^r E_r(p)."""
        if radius < 0:
            raise ValueError("The a-window radius must be nonnegative.")
        total = FockVector.zero()
        for r in range(-radius, radius + 1):
            total = total + self.apply_E(r, v).times_monomial((r, 0, 0))
        return total

    @staticmethod
    def apply_qH(v: FockVector) -> FockVector:
        def grade(state: MayaState, c: FormalCoefficient) -> FormalCoefficient:
            if state.charge != 0:
                raise ChargeError("q^H is only graded on the charge-zero sector.")
            return c.times_monomial((0, 0, int(state.energy)))

        return v.map_coefficients(grade)

    # -- vertex operators ---------------------------------------------

    def mode_weight(self, op: Gamma, n: int) -> FormalCoefficient:
        """s_n = u^(n j) q^(n k) p_n(x) / n."""
        key = ("mode", op.variables, n)
        power_sum = self.cache.get_or_compute(key, lambda: self.schur_service.power_sum(op.variables, n))
        return FormalCoefficient.monomial((0, n * op.u_power, n * op.q_power), power_sum * Fraction(1, n))

    def _mode_sum(self, op: Gamma, v: FockVector, cutoff: Optional[int], q_order: Optional[int]) -> FockVector:
        total = FockVector.zero()
        for state, c in v.items():
            energy = int(state.energy)
            reach = energy if op.sign > 0 else cutoff - energy
            single = FockVector.basis(state, c)
            for n in range(1, reach + 1):
                moved = self.apply_alpha(op.sign * n, single)
                total = total + moved.scaled(self.mode_weight(op, n))
        return total.truncate_q(q_order)

    def _gamma_basis(self, op: Gamma, state: MayaState, cutoff: Optional[int],
                     q_order: Optional[int]) -> FockVector:
        key = ("gamma", op, state, cutoff if op.sign < 0 else None, q_order)

        def compute() -> FockVector:
            term = FockVector.basis(state)
            total = term
            m = 1
            while not term.is_zero():
                term = self._mode_sum(op, term, cutoff, q_order).scaled(Fraction(1, m))
                total = total + term
                m += 1
            return total

        return self.cache.get_or_compute(key, compute)

    def apply_gamma(self, op: Gamma, v: FockVector, cutoff: Optional[int] = None,
                    q_order: Optional[int] = None) -> FockVector:
        """
        Applies Gamma_+(x) or Gamma_-(x) on the charge-zero sector.

        Args:
            op: The vertex operator descriptor.
            v: Input vector.
            cutoff: Highest output energy kept by Gamma_-; Gamma_+ ignores it.
            q_order: Drops coefficients of q-degree above this order when given.

        Returns:
            FockVector: The truncated image.

        Raises:
            CutoffError: If Gamma_- has no cutoff or the input already exceeds it.
            ChargeError: If v has components outside charge zero.
        """
        if any(s.charge != 0 for s in v.states()):
            raise ChargeError("Vertex operators are applied on the charge-zero sector only.")
        if op.sign < 0:
            if cutoff is None:
                raise CutoffError("Gamma_- needs an energy cutoff.")
            top = v.max_energy()
            if top is not None and top > cutoff:
                raise CutoffError(
                    f"cutoff too small: input energy {top} exceeds the cutoff {cutoff}.", cutoff=cutoff
                )
        total = FockVector.zero()
        for state, c in v.items():
            total = total + self._gamma_basis(op, state, cutoff, q_order).scaled(c)
        return total.truncate_q(q_order)

    # -- chains -------------------------------------------------------

    def apply(self, op: Operator, v: FockVector, cutoff: Optional[int] = None, radius: int = 0,
              q_order: Optional[int] = None) -> FockVector:
        if isinstance(op, Gamma):
            return self.apply_gamma(op, v, cutoff, q_order)
        if isinstance(op, EnergyOp):
            return self.apply_E_a(v, radius) if op.r is None else self.apply_E(op.r, v)
        if isinstance(op, QPowerH):
            return self.apply_qH(v).truncate_q(q_order)
        raise TypeError(f"Unknown operator {op!r}.")

    def apply_chain(self, chain: Sequence[Operator], v: FockVector, cutoffs: Sequence[Optional[int]] = (),
                    radius: int = 0, q_order: Optional[int] = None) -> FockVector:
        """
        Applies a product of operators, rightmost first.

        `cutoffs` runs parallel to `chain` and gives each Gamma_- its energy cutoff.
        """
        cutoffs = list(cutoffs) or [None] * len(chain)
        if len(cutoffs) != len(chain):
            raise ValueError("Give one cutoff entry per operator in the chain.")
        for op, cutoff in zip(reversed(chain), reversed(cutoffs)):
            v = self.apply(op, v, cutoff, radius, q_order)
        return v

    def matrix_entry(self, chain: Sequence[Operator], lam: Partition, mu: Partition,
                     cutoffs: Sequence[Optional[int]] = (), radius: int = 0) -> FormalCoefficient:
        """(v_lambda, O v_mu)."""
        image = self.apply_chain(chain, FockVector.from_partition(mu), cutoffs, radius)
        return image.coefficient(MayaState.from_partition(lam))
