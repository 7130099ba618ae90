import random

import pytest
from fractions import Fraction

from src.domain.series.models.agraded import AGradedSeries
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.rational_laurent import RationalLaurent, half_power_difference, one_minus
from src.domain.series.models.window import Window, format_half, to_twice
from src.utils.exceptions import AWindowError, NonInvertibleError, OrderMismatchError, WindowError

MACMAHON = [1, 1, 3, 6, 13, 24, 48]


@pytest.fixture
def macmahon_to_6() -> PSeries:
    return PSeries({2 * n: c for n, c in enumerate(MACMAHON)}, lower=0, top=12)


def test_to_twice_accepts_half_integers():
    assert to_twice(3) == 6
    assert to_twice("-3/2") == -3
    assert to_twice(Fraction(1, 2)) == 1
    assert format_half(3) == "3/2"
    assert format_half(-4) == "-2"


def test_to_twice_rejects_thirds():
    with pytest.raises(WindowError) as exc:
        to_twice("1/3")
    assert exc.value.exit_code == 2


def test_empty_window_is_rejected():
    with pytest.raises(WindowError):
        Window(4, 2)
    assert Window.from_p(-2, 2).mirrored() == Window(-4, 4)
    assert Window(0, 4).contains(Window(1, 3))


def test_difference_of_squares():
    product = PSeries({0: 1, 2: 1}) * PSeries({0: 1, 2: -1})
    assert product.items() == [(0, 1), (4, -1)]
    assert product.truncate(4) == PSeries({0: 1, 4: -1})


def test_half_powers_cancel():
    assert PSeries.monomial(-1) * PSeries.monomial(1) == PSeries.one()


def test_macmahon_times_one_minus_p(macmahon_to_6):
    product = macmahon_to_6 * one_minus(1)
    assert product.top == 12
    assert [product.coefficient(2 * n) for n in range(7)] == [1, 0, 2, 3, 7, 11, 24]


def test_invert_one_minus_p_is_geometric():
    inverse = one_minus(1).invert(10)
    assert inverse.items() == [(2 * n, 1) for n in range(6)]
    assert inverse.top == 10


def test_invert_monomial_is_exact():
    inverse = PSeries.monomial(1).invert()
    assert inverse == PSeries.monomial(-1)
    assert inverse.is_exact


def test_invert_macmahon_to_p4(macmahon_to_6):
    inverse = macmahon_to_6.truncate(8).invert()
    # prod (1 - p^m)^m = 1 - p - 2p^2 - p^3 + 0 p^4 + ...
    assert [inverse.coefficient(2 * n) for n in range(5)] == [1, -1, -2, -1, 0]


def test_invert_zero_raises():
    with pytest.raises(NonInvertibleError) as exc:
        PSeries.zero(4).invert()
    assert exc.value.message == "non-invertible"


def test_invert_exact_polynomial_needs_top():
    with pytest.raises(WindowError):
        one_minus(1).invert()


def test_truncate_beyond_top_raises():
    series = PSeries({0: 1}, top=4)
    with pytest.raises(WindowError):
        series.truncate(6)
    with pytest.raises(WindowError):
        series.coefficient(5)


def test_coefficient_below_lower_bound_is_rejected():
    with pytest.raises(WindowError):
        PSeries({-2: 1}, lower=0)


def test_product_keeps_relative_precision():
    left = PSeries({-2: 1, 0: 1}, top=4)
    right = PSeries({0: 1, 2: 1}, top=6)
    assert (left * right).top == min(4 + 0, 6 - 2)


def test_rational_geometric_tail():
    tail = RationalLaurent(PSeries.monomial(1), {1: 1})
    assert tail.expand(7).items() == [(1, 1), (3, 1), (5, 1), (7, 1)]


def test_rational_negative_factor_rewritten():
    value = RationalLaurent.from_factors(PSeries.one(), [1, -1])
    assert value == RationalLaurent(PSeries.monomial(2, -1), {1: 2})


def test_rational_cancellation():
    value = RationalLaurent(PSeries({0: 1, 4: -1}), {1: 1})
    assert value == RationalLaurent(PSeries({0: 1, 2: 1}))
    assert value.reduce().is_polynomial()


def test_half_power_difference_inverse():
    inverse = half_power_difference().power(-1)
    assert inverse == RationalLaurent(PSeries.monomial(1, -1), {1: 1})
    assert (inverse * half_power_difference()) == RationalLaurent.one()


def test_rational_substitute_inverse_and_derivative():
    tail = RationalLaurent(PSeries.one(), {1: 1})
    # 1/(1 - p^-1) = -p/(1 - p)
    assert tail.substitute_inverse() == RationalLaurent(PSeries.monomial(2, -1), {1: 1})
    # p d/dp 1/(1-p) = p/(1-p)^2
    assert tail.euler_derivative() == RationalLaurent(PSeries.monomial(2), {1: 2})


def test_non_invertible_rational():
    with pytest.raises(NonInvertibleError):
        RationalLaurent(PSeries({0: 1, 2: 1, 4: 1})).inverse()


def test_qseries_inverse_pair():
    one_minus_q = QSeries([PSeries.one(), PSeries({0: -1}), PSeries.zero(), PSeries.zero()])
    assert one_minus_q * one_minus_q.invert() == QSeries.one(3)


def test_qseries_orders_must_match():
    with pytest.raises(OrderMismatchError):
        QSeries.one(2) + QSeries.one(3)


def test_qseries_offsets_are_symbolic():
    eta = QSeries.one(2).with_offset(Fraction(1, 24))
    product = eta * eta.invert()
    assert product.q_offset == 0
    with pytest.raises(OrderMismatchError):
        eta.mismatches(QSeries.one(2))


def test_qseries_restrict_reports_small_window():
    series = QSeries([PSeries.one(), PSeries({-4: 1})])
    with pytest.raises(WindowError) as exc:
        series.restrict(Window(-2, 2))
    assert "window too small" in exc.value.message


def test_qseries_shift_and_substitute():
    series = QSeries([PSeries.one(), PSeries({2: 1}), PSeries.zero()])
    shifted = series.shift_q(1)
    assert shifted.coefficient(0).is_zero()
    assert shifted.coefficient(1) == PSeries.one()
    assert series.substitute_q(2).coefficient(2) == PSeries({2: 1})


def test_agraded_rejects_exponent_outside_window():
    with pytest.raises(AWindowError):
        AGradedSeries({2: QSeries.one(1)}, 1, 1)
    graded = AGradedSeries({1: QSeries.one(1)}, 1, 1)
    assert graded.coefficient(-1) == QSeries.zero(1)
    with pytest.raises(AWindowError):
        graded.coefficient(2)


def _random_series(rng: random.Random) -> PSeries:
    """A truncated series with a nonzero leading term and some gaps."""
    lower = rng.randrange(-4, 2)
    top = lower + rng.randrange(4, 10)
    coeffs = {lower: Fraction(rng.choice([-2, -1, 1, 3]), rng.randint(1, 4))}
    for e in range(lower + 1, top + 1):
        if rng.random() < 0.6:
            coeffs[e] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return PSeries(coeffs, lower=lower, top=top)


@pytest.mark.parametrize("seed", range(20))
def test_ring_axioms(seed: int):
    rng = random.Random(seed)
    a, b, c = (_random_series(rng) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * a.invert()).mismatches(PSeries.one()) == []


@pytest.mark.parametrize("seed", range(10))
def test_rational_expansion_matches_inverted_denominator(seed: int):
    rng = random.Random(seed)
    low = rng.randrange(-3, 1)
    numerator = PSeries({low: rng.randint(1, 3), **{e: rng.randint(-3, 3) for e in range(low + 1, 5)}})
    denominator = {i: rng.randint(1, 2) for i in rng.sample(range(1, 4), 2)}
    top = 12
    product = PSeries.one()
    for i, m in denominator.items():
        product = product * one_minus(i).power(m)
    expanded = RationalLaurent(numerator, denominator).expand(top)
    assert expanded.mismatches(numerator * product.invert(top), top) == []
