import pytest

from src.domain.partitions.models.partition import (
    LegTriple,
    Partition,
    leg_triples_up_to,
    partitions_of,
    partitions_up_to,
)
from src.domain.partitions.models.partition3d import Partition3D, leg_multiplicity
from src.domain.partitions.services.enumeration_service import EnumerationService
from src.utils.exceptions import PartitionFormatError

BOX = Partition.box()
EMPTY = Partition()


@pytest.fixture
def enumeration() -> EnumerationService:
    return EnumerationService()


def test_conjugate():
    assert Partition((3, 1)).conjugate() == Partition((2, 1, 1))
    assert EMPTY.conjugate() == EMPTY
    assert Partition((2, 2)).conjugate() == Partition((2, 2))


def test_stats():
    assert Partition((2, 1)).stats() == (3, 5, 2)
    assert EMPTY.stats() == (0, 0, 0)
    assert Partition((4,)).stats() == (4, 16, 1)


def test_partitions_of():
    assert [lam.parts for lam in partitions_of(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(partitions_of(0)) == [EMPTY]
    assert [sum(1 for _ in partitions_of(n)) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    assert len(partitions_up_to(3)) == 7


def test_partitions_of_negative():
    with pytest.raises(ValueError):
        list(partitions_of(-1))


def test_parse_partition():
    assert Partition.parse("3,1") == Partition((3, 1))
    assert Partition.parse("-") == EMPTY
    assert str(Partition((2, 1))) == "2,1"


@pytest.mark.parametrize("text", ["1,3", "a", "2,0"])
def test_parse_partition_rejects_malformed(text):
    with pytest.raises(PartitionFormatError) as exc:
        Partition.parse(text)
    assert exc.value.exit_code == 2


def test_parse_leg_triple():
    legs = LegTriple.parse("2,1;-;1")
    assert legs == LegTriple(Partition((2, 1)), EMPTY, BOX)
    assert str(legs) == "2,1;-;1"
    assert legs.size == 4
    with pytest.raises(PartitionFormatError):
        LegTriple.parse("1;1")


def test_leg_triple_symmetries():
    legs = LegTriple(Partition((2,)), BOX, EMPTY)
    assert legs.cyclic() == LegTriple(BOX, EMPTY, Partition((2,)))
    assert legs.reflected() == LegTriple(BOX, Partition((1, 1)), EMPTY)
    assert len(leg_triples_up_to(1)) == 4


def test_subpartitions():
    subs = Partition((2, 1)).subpartitions()
    assert subs == [EMPTY, BOX, Partition((2,)), Partition((1, 1)), Partition((2, 1))]


def test_leg_multiplicity_at_origin():
    assert leg_multiplicity(LegTriple(BOX, BOX, BOX), (0, 0, 0)) == 3
    assert leg_multiplicity(LegTriple(BOX, EMPTY, EMPTY), (5, 0, 0)) == 1
    assert leg_multiplicity(LegTriple(BOX, EMPTY, EMPTY), (0, 1, 0)) == 0


@pytest.mark.parametrize("legs, base", [
    (LegTriple(BOX, EMPTY, EMPTY), 0),
    (LegTriple(BOX, BOX, EMPTY), -1),
    (LegTriple(BOX, BOX, BOX), -2),
])
def test_base_volume(enumeration: EnumerationService, legs: LegTriple, base: int):
    assert enumeration.minimal_config(legs).base_volume == base


def test_renormalized_volume(enumeration: EnumerationService):
    assert enumeration.renormalized_volume(Partition3D(LegTriple(BOX, BOX, BOX))) == -2
    assert enumeration.renormalized_volume(Partition3D(LegTriple(), frozenset({(0, 0, 0)}))) == 1
    single = Partition3D(LegTriple(BOX, EMPTY, EMPTY), frozenset({(0, 1, 0)}))
    assert single.is_valid()
    assert enumeration.renormalized_volume(single) == 1


def test_invalid_3d_partition():
    floating = Partition3D(LegTriple(), frozenset({(1, 0, 0)}))
    assert not floating.is_valid()


def test_plane_partition_counts(enumeration: EnumerationService):
    counts = enumeration.enumerate_asymptotic(LegTriple(), 6)
    assert [counts[v] for v in range(7)] == [1, 1, 3, 6, 13, 24, 48]


def test_single_leg_budget_zero(enumeration: EnumerationService):
    assert enumeration.enumerate_asymptotic(LegTriple(BOX, EMPTY, EMPTY), 0) == {0: 1}


def test_three_legs_budget_zero(enumeration: EnumerationService):
    assert enumeration.enumerate_asymptotic(LegTriple(BOX, BOX, BOX), 0) == {-2: 1}


def test_single_leg_counts_are_macmahon_over_one_minus_p(enumeration: EnumerationService):
    counts = enumeration.enumerate_asymptotic(LegTriple(BOX, EMPTY, EMPTY), 4)
    # M(p)/(1-p): partial sums of 1, 1, 3, 6, 13
    assert [counts[v] for v in range(5)] == [1, 2, 5, 11, 24]


def test_box_stability_check(enumeration: EnumerationService):
    counts = enumeration.enumerate_asymptotic(LegTriple(BOX, BOX, EMPTY), 3, check_box=True)
    assert min(counts) == -1


def test_negative_budget(enumeration: EnumerationService):
    with pytest.raises(ValueError):
        enumeration.enumerate_asymptotic(LegTriple(), -1)


def test_vertex_box_counting(enumeration: EnumerationService):
    series = enumeration.vertex_box_counting(LegTriple(BOX, BOX, BOX), 2)
    assert series.lower == -4
    assert series.top == 2
    assert series.coefficient(-4) == 1
