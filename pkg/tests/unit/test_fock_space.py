import pytest
from fractions import Fraction

from src.domain.fock.models.coefficient import FormalCoefficient
from src.domain.fock.models.fock_vector import FockVector
from src.domain.fock.models.maya_state import MayaState, charge_zero_states
from src.domain.fock.models.operators import EnergyOp, Gamma, QPowerH
from src.domain.fock.services.check_service import CHECKS, FockCheckService
from src.domain.fock.services.operator_service import OperatorService
from src.domain.fock.services.trace_service import TraceService, normal_order
from src.domain.partitions.models.partition import Partition, partitions_up_to
from src.domain.schur.services.schur_service import SchurService
from src.domain.schur.services.vertex_service import VertexService
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import Window
from src.domain.series.repositories.series_cache import SeriesCache
from src.domain.series.services.product_service import ProductService
from src.utils.exceptions import ChargeError, CutoffError

BOX = Partition.box()


@pytest.fixture(scope="module")
def cache() -> SeriesCache:
    return SeriesCache()


@pytest.fixture(scope="module")
def operators(cache: SeriesCache) -> OperatorService:
    return OperatorService(SchurService(cache), cache)


@pytest.fixture(scope="module")
def traces(operators: OperatorService, cache: SeriesCache) -> TraceService:
    return TraceService(operators, ProductService(cache))


@pytest.fixture(scope="module")
def checks(operators: OperatorService, traces: TraceService, cache: SeriesCache) -> FockCheckService:
    products = ProductService(cache)
    return FockCheckService(operators, traces, VertexService(operators.schur_service, products), products)


def test_maya_vacuum():
    vacuum = MayaState.from_partition(Partition())
    assert vacuum == MayaState.vacuum()
    assert vacuum.particles == frozenset() and vacuum.holes == frozenset()


def test_maya_single_box():
    state = MayaState.from_partition(BOX)
    assert state.particles == frozenset({1})
    assert state.holes == frozenset({-1})
    assert state.energy == 1
    assert state.charge == 0


def test_maya_round_trip_for_small_partitions():
    for state in charge_zero_states(5):
        assert MayaState.from_partition(state.to_partition()) == state
    assert MayaState.from_partition(Partition((3, 1))).energy == 4


def test_maya_inverse_over_partitions_up_to_8():
    for lam in partitions_up_to(8):
        assert MayaState.from_partition(lam).to_partition() == lam, str(lam)


def test_maya_column_of_ones():
    state = MayaState.from_partition(Partition((1, 1, 1)))
    assert state == MayaState(frozenset({1}), frozenset({-5}))
    assert state.to_partition() == Partition((1, 1, 1))


def test_charged_state_has_no_partition():
    with pytest.raises(ChargeError) as exc:
        MayaState(frozenset({1}), frozenset()).to_partition()
    assert exc.value.exit_code == 2


def test_psi_then_psi_star_builds_single_box(operators: OperatorService):
    image = operators.apply_psi(1, operators.apply_psi_star(-1, FockVector.vacuum()))
    assert image == FockVector.from_partition(BOX)


def test_alpha_raises_and_lowers(operators: OperatorService):
    assert operators.apply_alpha(-1, FockVector.vacuum()) == FockVector.from_partition(BOX)
    assert operators.apply_alpha(1, FockVector.from_partition(BOX)) == FockVector.vacuum()
    with pytest.raises(ValueError):
        operators.apply_alpha(0, FockVector.vacuum())


def test_e0_on_vacuum(operators: OperatorService):
    image = operators.apply_E(0, FockVector.vacuum())
    expected = RationalLaurent(PSeries.monomial(1, -1), {1: 1})
    assert image.coefficient(MayaState.vacuum()) == FormalCoefficient.scalar(expected)


def test_even_positions_are_rejected(operators: OperatorService):
    with pytest.raises(ValueError):
        operators.apply_psi(2, FockVector.vacuum())


def test_gamma_minus_needs_cutoff(operators: OperatorService):
    with pytest.raises(CutoffError):
        operators.apply_gamma(Gamma.minus(), FockVector.vacuum())
    with pytest.raises(CutoffError) as exc:
        operators.apply_gamma(Gamma.minus(), FockVector.from_partition(Partition((2,))), 1)
    assert "cutoff too small" in exc.value.message


def test_gamma_needs_charge_zero(operators: OperatorService):
    charged = FockVector.basis(MayaState(frozenset({1}), frozenset()))
    with pytest.raises(ChargeError):
        operators.apply_gamma(Gamma.plus(), charged)
    with pytest.raises(ChargeError):
        operators.apply_qH(charged)


def test_gamma_plus_on_single_box(operators: OperatorService):
    # (v_0, Gamma_+(p^-rho) v_box) = s_box(p^-rho) = p^(1/2)/(1-p)
    image = operators.apply_gamma(Gamma.plus(), FockVector.from_partition(BOX))
    expected = RationalLaurent(PSeries.monomial(1), {1: 1})
    assert image.coefficient(MayaState.vacuum()) == FormalCoefficient.scalar(expected)
    assert image.coefficient(MayaState.from_partition(BOX)) == FormalCoefficient.one()


def test_normal_order_moves_gamma_plus_right():
    ops, q_powers = normal_order([Gamma.plus(), Gamma.minus()])
    assert isinstance(ops[0], Gamma) and ops[0].sign < 0
    assert q_powers


def test_trace_of_q_power_h(traces: TraceService):
    trace = traces.graded_trace([QPowerH()], 4, Window.from_p(0, 2))
    assert trace.exponents() == [0]
    assert [trace.coefficient(0).coefficient(d).coefficient(0) for d in range(5)] == [1, 1, 2, 3, 5]


def test_trace_rejects_chain_without_q_power_h(traces: TraceService):
    with pytest.raises(ValueError):
        traces.graded_trace([EnergyOp()], 2, Window.from_p(0, 2))
    with pytest.raises(ValueError):
        traces.graded_trace([QPowerH()], 2, Window.from_p(0, 2), ordering="sideways")


def test_trace_rejects_small_cutoff(traces: TraceService):
    with pytest.raises(CutoffError):
        traces.graded_trace([Gamma.plus(), Gamma.minus(), QPowerH()], 3, Window.from_p(0, 2), cutoff=2)


def test_direct_cutoff():
    assert TraceService.direct_cutoff(2, Window.from_p(-4, 3), 1) == 4 + 3 + 1 + 1


def test_unknown_check(checks: FockCheckService):
    with pytest.raises(ValueError):
        checks.run("braiding", 2, 1, Window.from_p(-2, 2), 1)
    assert "lemma52" in CHECKS


def test_anticommutation(checks: FockCheckService):
    report = checks.anticommutation_check(emax=3, kmax=7)
    assert report.passed, report.mismatches[:3]


def test_adjointness(checks: FockCheckService):
    report = checks.adjointness_check(emax=3, kmax=7)
    assert report.passed, report.mismatches[:3]


def test_matrix_coefficients(checks: FockCheckService):
    report = checks.matrix_coefficient_check(emax=3)
    assert report.passed, report.mismatches[:3]


def test_field_product(checks: FockCheckService):
    report = checks.field_product_check(emax=3, radius=2)
    assert report.passed, report.mismatches[:3]


def test_commutation_relations(checks: FockCheckService):
    report = checks.commutation_checks(2, Window.from_p(-2, 4), 1)
    assert report.passed, report.mismatches[:3]


def test_commutation_needs_emax_two(checks: FockCheckService):
    with pytest.raises(ValueError):
        checks.commutation_checks(1, Window.from_p(-2, 2), 1)


def test_trace_checks(checks: FockCheckService):
    report = checks.run("traces", 5, 2, Window.from_p(-2, 1), 1)
    assert report.passed, report.mismatches[:3]
    assert "total" in report.timings


def test_lemma51(checks: FockCheckService):
    report = checks.lemma51_check(2, Window.from_p(-4, 3), 1)
    assert report.passed, report.mismatches[:3]


def test_lemma52(checks: FockCheckService):
    report = checks.lemma52_check(2, Window.from_p(-4, 3), 2)
    assert report.passed, report.mismatches[:3]


@pytest.mark.parametrize("energy", [EnergyOp(0), EnergyOp()])
def test_lemma_traces_agree_in_both_orderings(checks: FockCheckService, energy: EnergyOp):
    chain = [energy, Gamma.plus(), Gamma.minus(), QPowerH()]
    # capped at q^2, p^2 and |a| <= 1 whatever the requested scale
    assert checks.ordering_cross_check(chain, 4, Window.from_p(-8, 8), 4, "orderings") == []


@pytest.mark.slow
def test_lemma52_at_order_four(checks: FockCheckService):
    report = checks.lemma52_check(4, Window.from_p(-8, 4), 3)
    assert report.passed, report.mismatches[:3]


def test_formal_coefficient_arithmetic():
    u = FormalCoefficient.monomial((0, 1, 0))
    value = (FormalCoefficient.one() - u) * (FormalCoefficient.one() + u)
    assert value == FormalCoefficient({(0, 0, 0): RationalLaurent.one(), (0, 2, 0): RationalLaurent.constant(-1)})
    assert value.truncate_q(0) == value
    assert (value * Fraction(0)).is_zero()
