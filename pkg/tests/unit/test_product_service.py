import pytest
from fractions import Fraction

from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.window import Window
from src.domain.series.repositories.series_cache import SeriesCache
from src.domain.series.services.product_service import ProductService, divisor_pairs, macmahon_factors
from src.domain.series.services.working_window import build_with_slack
from src.utils.exceptions import AWindowError, NonUnitFactorError, WindowError


@pytest.fixture
def cache() -> SeriesCache:
    return SeriesCache()


@pytest.fixture
def products(cache: SeriesCache) -> ProductService:
    return ProductService(cache)


def test_macmahon_coefficients(products: ProductService):
    macmahon = products.macmahon(12)
    assert [macmahon.coefficient(2 * n) for n in range(7)] == [1, 1, 3, 6, 13, 24, 48]
    assert macmahon.top == 12


def test_partition_counts(products: ProductService):
    series = products.partition_series(6)
    assert [series.coefficient(d).coefficient(0) for d in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    assert series.top() is None


def test_inverse_of_partition_product(products: ProductService):
    euler = products.partition_series(5, power=1)
    assert euler.invert().coefficient(5) == PSeries({0: 7})


def test_first_order_macmahon_in_q(products: ProductService):
    series = products.euler_product(macmahon_factors(8, q_exp=1), 1, Window(0, 8))
    # sum_m m p^m
    assert series.coefficient(1).items() == [(2, 1), (4, 2), (6, 3), (8, 4)]


def test_negative_exponents_are_normalized(products: ProductService):
    # (1 - p^-1) = -p^-1 (1 - p)
    series = products.euler_product([(-2, 0, 1)], 0, Window(-2, 4))
    assert series.coefficient(0) == PSeries({-2: -1, 0: 1})


def test_unit_factor_with_negative_multiplicity(products: ProductService):
    with pytest.raises(NonUnitFactorError) as exc:
        products.euler_product([(0, 0, -1)], 2, Window(0, 4))
    assert exc.value.exit_code == 2


def test_unit_factor_with_positive_multiplicity_is_zero(products: ProductService):
    series = products.euler_product([(0, 0, 1), (2, 1, -1)], 2, Window(0, 4))
    assert all(c.is_zero() for c in series.coeffs)


def test_results_are_cached(products: ProductService, cache: SeriesCache):
    first = products.macmahon(6)
    size = len(cache)
    assert products.macmahon(6) is first
    assert len(cache) == size


def test_theta_leading_coefficient(products: ProductService):
    theta = products.theta_exact(3)
    assert theta.coefficient(0) == PSeries({1: 1, -1: -1})


def test_theta_checks(products: ProductService):
    assert products.theta_inversion_check(4) == []
    assert products.theta_sum_check(4) == []


def test_theta_times_inverse(products: ProductService):
    window = Window.from_p(-6, 6)
    product = products.theta_series(2, window) * products.theta_inverse(2, window)
    assert product.mismatches(QSeries.one(2)) == []


def test_theta_window_too_small(products: ProductService):
    with pytest.raises(WindowError) as exc:
        products.theta_series(3, Window.from_p(-1, 1))
    assert "window too small" in exc.value.message


def test_eta_offset(products: ProductService):
    assert products.eta_series(3, -1).q_offset == Fraction(-1, 24)


def test_triple_product(products: ProductService):
    result = products.jacobi_triple_product_a(4, 3)
    assert result.mismatches == []
    assert result.product.coefficient(0).coefficient(0) == PSeries.one()
    assert result.product.coefficient(0).coefficient(2).is_zero()
    assert result.product.coefficient(1).coefficient(0) == PSeries({0: -1})
    assert result.product.coefficient(2).coefficient(1) == PSeries({0: 1})


def test_triple_product_radius():
    assert ProductService.triple_product_radius(4) == 3
    assert ProductService.triple_product_radius(0) == 1


def test_triple_product_needs_wide_a_window(products: ProductService):
    with pytest.raises(AWindowError):
        products.jacobi_triple_product_a(4, 2)


def test_divisor_pairs():
    assert divisor_pairs(4) == [(1, 1), (2, 1), (2, 2), (3, 1), (3, 3), (4, 1), (4, 2), (4, 4)]


def test_build_with_slack_retries_until_top_reached():
    calls = []

    def build(working: Window) -> PSeries:
        calls.append(working.high)
        return PSeries({0: 1}, top=working.high - 6)

    result = build_with_slack(build, Window(0, 4), 2, lambda s, w: s.truncate(w.high))
    assert result.top == 4
    assert calls == [6, 8, 12]


def test_build_with_slack_stops_on_small_window():
    def build(working: Window):
        raise WindowError("window too small: floor")

    with pytest.raises(WindowError) as exc:
        build_with_slack(build, Window(0, 4), 2, lambda s, w: s)
    assert "window too small" in exc.value.message


def test_macmahon_is_stable_across_nested_windows(products: ProductService):
    assert products.macmahon(16).truncate(8) == products.macmahon(8).truncate(8)


def test_euler_product_is_stable_across_nested_windows(products: ProductService):
    # M(p, q) / ((1 - p q)(1 - p^-1 q)), the q^d coefficient reaching down to p^-d
    factors = macmahon_factors(16, q_exp=1) + [(2, 1, -1), (-2, 1, -1)]
    narrow = products.euler_product(factors, 2, Window(-4, 6))
    wide = products.euler_product(factors, 2, Window(-8, 12))
    assert wide.truncate(6) == narrow.truncate(6)
