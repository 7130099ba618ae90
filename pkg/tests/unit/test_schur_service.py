import pytest
from fractions import Fraction
from itertools import product

from src.domain.partitions.models.partition import LegTriple, Partition, leg_triples_up_to, partitions_up_to
from src.domain.partitions.services.enumeration_service import EnumerationService
from src.domain.schur.models.varlist import VarList
from src.domain.schur.services.determinant import determinant
from src.domain.schur.services.schur_service import SchurService
from src.domain.schur.services.vertex_service import VertexService
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.repositories.series_cache import SeriesCache
from src.domain.series.services.product_service import ProductService
from src.utils.exceptions import WindowError

BOX = Partition.box()
EMPTY = Partition()


@pytest.fixture(scope="module")
def cache() -> SeriesCache:
    return SeriesCache()


@pytest.fixture(scope="module")
def schur(cache: SeriesCache) -> SchurService:
    return SchurService(cache)


@pytest.fixture(scope="module")
def vertex(schur: SchurService, cache: SeriesCache) -> VertexService:
    return VertexService(schur, ProductService(cache))


def _tableau_weight(top: int) -> PSeries:
    """Column-strict tableaux of shape (2,1) with entry i weighted p^(i - 1/2)."""
    m = top // 2 + 1
    terms = {}
    for a, b, c in product(range(1, m + 1), repeat=3):
        # first row a <= b, column a < c
        if a <= b and a < c:
            e = (2 * a - 1) + (2 * b - 1) + (2 * c - 1)
            if e <= top:
                terms[e] = terms.get(e, 0) + 1
    return PSeries(terms, top=top)


def test_determinant_of_integers():
    matrix = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert determinant(matrix, Fraction(1), Fraction(0)) == 5
    assert determinant([], Fraction(1), Fraction(0)) == 1


def test_determinant_with_zero_entries():
    matrix = [[Fraction(1), None, Fraction(2)], [None, Fraction(3), None], [Fraction(4), None, Fraction(5)]]
    assert determinant(matrix, Fraction(1), Fraction(0)) == -9


def test_varlist_exponents():
    variables = VarList.principal(Partition((2,)))
    assert variables.exponent(1) == -3
    assert variables.exponent(2) == 3
    assert variables.tail_start() == 3
    assert VarList.principal(inverted=True).exponent(1) == -1


def test_complete_homogeneous(schur: SchurService):
    principal = VarList.principal()
    assert schur.complete_exact(principal, 0) == RationalLaurent.one()
    assert schur.complete_exact(principal, 1) == RationalLaurent(PSeries.monomial(1), {1: 1})
    assert schur.complete_exact(principal, 2) == RationalLaurent(PSeries.monomial(2), {1: 1, 2: 1})


def test_complete_homogeneous_backends_agree(schur: SchurService):
    principal = VarList.principal()
    windowed = schur.complete_homogeneous(principal, 3, 12)
    exact = schur.complete_homogeneous_exact(principal, 3)
    for h, value in zip(windowed, exact):
        assert h.mismatches(value.expand(12)) == []


def test_skew_schur_trivial_cases(schur: SchurService):
    principal = VarList.principal()
    assert schur.skew_schur_exact(BOX, EMPTY, principal) == RationalLaurent(PSeries.monomial(1), {1: 1})
    assert schur.skew_schur_exact(Partition((2, 1)), Partition((2, 1)), principal) == RationalLaurent.one()
    assert schur.skew_schur_exact(BOX, Partition((2,)), principal).is_zero()


def test_schur_21_matches_tableaux(schur: SchurService):
    lam = Partition((2, 1))
    top = 15
    expected = _tableau_weight(top)
    assert schur.skew_schur(lam, EMPTY, VarList.principal(), top).mismatches(expected) == []
    assert schur.skew_schur(lam, EMPTY, VarList.principal(), top, backend="windowed").mismatches(expected) == []


def test_windowed_backend_rejects_inverted(schur: SchurService):
    with pytest.raises(WindowError):
        schur.skew_schur(BOX, EMPTY, VarList.principal(inverted=True), 6, backend="windowed")


def test_conjugation_relation(schur: SchurService):
    for lam, eta, nu in [(Partition((2,)), EMPTY, EMPTY), (Partition((2, 1)), BOX, BOX),
                         (Partition((3, 1)), Partition((1,)), Partition((2,)))]:
        result = schur.conjugation_relation_check(lam, eta, nu, 10)
        assert result.passed, (lam, eta, nu, result.mismatches)


def test_ratio_box(schur: SchurService):
    assert schur.ratio_box(EMPTY) == RationalLaurent(PSeries.monomial(1), {1: 1})
    assert schur.ratio_box(BOX) == RationalLaurent(PSeries.monomial(-1)) + RationalLaurent(PSeries.monomial(3), {1: 1})
    expected = RationalLaurent(PSeries({-3: 1, 1: 1})) + RationalLaurent(PSeries.monomial(5), {1: 1})
    assert schur.ratio_box(Partition((2, 1))) == expected


def test_ratio_two_box(schur: SchurService):
    assert schur.ratio_two_box(EMPTY) == RationalLaurent.one() + RationalLaurent(PSeries.monomial(2), {1: 2})


def test_ratio_two_box_conjugation_symmetry(schur: SchurService):
    for lam in partitions_up_to(4):
        assert schur.ratio_two_box(lam).substitute_inverse() == schur.ratio_two_box(lam.conjugate())


def test_vertex_no_legs_is_macmahon(vertex: VertexService):
    assert vertex.vertex_rational(LegTriple()) == RationalLaurent.one()
    assert vertex.vertex_orv(LegTriple(), 12).items() == [(2 * n, c) for n, c in enumerate([1, 1, 3, 6, 13, 24, 48])]


def test_vertex_single_leg(vertex: VertexService):
    for legs in (LegTriple(BOX, EMPTY, EMPTY), LegTriple(EMPTY, BOX, EMPTY), LegTriple(EMPTY, EMPTY, BOX)):
        assert vertex.vertex_rational(legs) == RationalLaurent(PSeries.one(), {1: 1})


def test_vertex_cyclic_symmetry(vertex: VertexService):
    legs = LegTriple(Partition((2,)), BOX, EMPTY)
    assert vertex.vertex_rational(legs) == vertex.vertex_rational(legs.cyclic())


def test_vertex_reflection_symmetry(vertex: VertexService):
    for legs in leg_triples_up_to(3):
        assert vertex.vertex_rational(legs) == vertex.vertex_rational(legs.reflected()), str(legs)


@pytest.mark.slow
def test_vertex_symmetries_up_to_size_5(vertex: VertexService):
    for legs in leg_triples_up_to(5):
        value = vertex.vertex_rational(legs)
        assert value == vertex.vertex_rational(legs.cyclic()), str(legs)
        assert value == vertex.vertex_rational(legs.reflected()), str(legs)


@pytest.mark.parametrize("text", ["1;1;1", "2;1;-", "1,1;-;1", "2,1;-;-", "1;1;-"])
def test_vertex_matches_box_counting(vertex: VertexService, text: str):
    legs = LegTriple.parse(text)
    top = 8
    counted = EnumerationService().vertex_box_counting(legs, top)
    assert vertex.vertex_orv(legs, top).mismatches(counted) == []


@pytest.mark.slow
def test_vertex_matches_box_counting_up_to_size_4(vertex: VertexService):
    enumeration = EnumerationService()
    for lam, mu, nu in product(partitions_up_to(2), repeat=3):
        legs = LegTriple(lam, mu, nu)
        if legs.size > 4:
            continue
        top = 6
        assert vertex.vertex_orv(legs, top).mismatches(enumeration.vertex_box_counting(legs, top)) == [], str(legs)
