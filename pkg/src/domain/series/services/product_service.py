from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from src.domain.series.models.agraded import AGradedSeries, AMismatch
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QMismatch, QSeries
from src.domain.series.models.rational_laurent import half_power_difference
from src.domain.series.models.window import HalfExp, Window, format_half
from src.domain.series.repositories.series_cache import SeriesCache
from src.domain.series.services.working_window import build_with_slack
from src.utils.exceptions import AWindowError, NonUnitFactorError, WindowError
from src.utils.logger import Logger

logger = Logger(__name__)

# (doubled p exponent, q exponent, multiplicity): the factor (1 - p^(e/2) q^k)^n.
Factor = Tuple[HalfExp, int, int]


def macmahon_factors(top: HalfExp, q_exp: int = 0, power: int = 1) -> List[Factor]:
    """Factors of M(p, q^k)^power = prod_m (1 - p^m q^k)^(-m*power) that can reach p^(top/2)."""
    return [(2 * m, q_exp, -m * power) for m in range(1, top // 2 + 1)]


def partition_factors(order: int, power: int = -1) -> List[Factor]:
    """prod_{d<=N} (1 - q^d)^power."""
    return [(0, d, power) for d in range(1, order + 1)]


def divisor_pairs(order: int) -> List[Tuple[int, int]]:
    """All (d, k) with k | d and d <= order, by direct sieve."""
    pairs = []
    for k in range(1, order + 1):
        for d in range(k, order + 1, k):
            pairs.append((d, k))
    return sorted(pairs)


@dataclass(frozen=True)
class TripleProductResult:
    product: AGradedSeries
    theta_sum: AGradedSeries
    mismatches: List[AMismatch]


class ProductService:
    """Builders for the standard infinite products: Euler products, MacMahon, theta, eta."""

    def __init__(self, cache: SeriesCache):
        self.cache = cache

    def euler_product(self, factors: Sequence[Factor], order: int, window: Window) -> QSeries:
        """
        Expands prod (1 - p^e q^k)^n to q-order N, exact on the window.

        Args:
            factors: (doubled p exponent, q exponent, multiplicity) triples.
            order: The q-order N.
            window: Requested p-window.

        Returns:
            QSeries: The truncated product.

        Raises:
            NonUnitFactorError: For a factor (1 - p^0 q^0) with negative multiplicity.
            WindowError: If the window cannot be reached or is too small.
        """
        key = ("euler", tuple(factors), order, window)
        cached = self.cache.get(key)
        if cached is not None:
            return cached

        sign, shift, normalized = self._normalize(factors)
        if normalized is None:
            return self.cache.put(key, QSeries.zero(order))

        pure_q = all(e == 0 for e, _, _ in normalized)
        ratios = [-(e // k) for e, k, _ in normalized if k > 0 and e < 0]
        slack = order * max(ratios, default=0)

        def build(working: Window) -> QSeries:
            return self._expand(normalized, order, working.high - shift, sign, shift)

        if pure_q:
            result = self._expand(normalized, order, 0, sign, shift, exact=True)
        else:
            result = build_with_slack(build, window, slack, lambda q, w: q.restrict(w))
        logger.debug("Euler product with %d factors to q^%d on %s", len(normalized), order, window)
        return self.cache.put(key, result)

    @staticmethod
    def _normalize(factors: Iterable[Factor]):
        """Rewrites (1 - p^-j)^n as (-1)^n p^(-jn) (1 - p^j)^n and validates the rest."""
        sign, shift = 1, 0
        out: List[Factor] = []
        for e, k, n in factors:
            if k < 0:
                raise ValueError("q exponents of Euler factors must be nonnegative.")
            if n == 0:
                continue
            if k == 0 and e == 0:
                if n < 0:
                    raise NonUnitFactorError("non-unit factor", factor=(e, k, n))
                return sign, shift, None
            if k == 0 and e < 0:
                sign *= (-1) ** (n % 2)
                shift += e * n
                e = -e
            out.append((e, k, n))
        return sign, shift, out

    @staticmethod
    def _expand(factors: Sequence[Factor], order: int, top: HalfExp, sign: int, shift: HalfExp,
                exact: bool = False) -> QSeries:
        coeffs: List[Dict[HalfExp, Fraction]] = [dict() for _ in range(order + 1)]
        coeffs[0][0] = Fraction(1)
        tops = [top] * (order + 1)
        for e, k, n in factors:
            if k > order:
                continue
            for _ in range(abs(n)):
                if k == 0:
                    for d in range(order + 1):
                        row = coeffs[d]
                        if not row:
                            continue
                        low = min(row)
                        if n < 0:
                            for x in range(low, tops[d] - e + 1):
                                v = row.get(x)
                                if v:
                                    row[x + e] = row.get(x + e, Fraction(0)) + v
                        else:
                            for x in range(tops[d], low + e - 1, -1):
                                v = row.get(x - e)
                                if v:
                                    row[x] = row.get(x, Fraction(0)) - v
                    continue
                span = range(k, order + 1) if n < 0 else range(order, k - 1, -1)
                for d in span:
                    src, row = coeffs[d - k], coeffs[d]
                    limit = tops[d - k] + e
                    for x, v in list(src.items()):
                        t = x + e
                        if t <= top and v:
                            row[t] = row.get(t, Fraction(0)) + (v if n < 0 else -v)
                    tops[d] = min(tops[d], limit)
        out = []
        for d in range(order + 1):
            terms = {x + shift: v * sign for x, v in coeffs[d].items() if v and x <= tops[d]}
            out.append(PSeries(terms) if exact else PSeries(terms, top=tops[d] + shift))
        return QSeries(out)

    # -- named products -----------------------------------------------

    def macmahon(self, top: HalfExp) -> PSeries:
        """M(p) = prod_m (1 - p^m)^(-m), exact up to p^(top/2)."""
        if top < 0:
            return PSeries({}, top, top)
        window = Window(0, top)
        return self.euler_product(macmahon_factors(top), 0, window).coefficient(0)

    def partition_series(self, order: int, power: int = -1) -> QSeries:
        """prod_d (1 - q^d)^power with exact integer coefficients."""
        return self.euler_product(partition_factors(order, power), order, Window(0, 0))

    def eta_series(self, order: int, power: int = 1) -> QSeries:
        """eta^power = q^(power/24) prod (1 - q^m)^power, the offset kept symbolic."""
        return self.partition_series(order, power).with_offset(Fraction(power, 24))

    def elliptic_product(self, order: int, window: Window) -> QSeries:
        """
        prod_m M(p, q^m) / ((1 - p q^m)(1 - p^-1 q^m)).

        The q^d coefficient reaches down to p^-d, so the window floor must allow it.
        """
        reach = window.high + 2 * order
        factors: List[Factor] = []
        for m in range(1, order + 1):
            factors += macmahon_factors(reach, q_exp=m)
            factors += [(2, m, -1), (-2, m, -1)]
        return self.euler_product(factors, order, window)

    def theta_exact(self, order: int) -> QSeries:
        """
        Theta(p, q) = (p^(1/2) - p^(-1/2)) prod_m (1 - p q^m)(1 - p^-1 q^m) / (1 - q^m)^2.

        The q^d coefficient is a Laurent polynomial supported in [-d - 1/2, d + 1/2],
        so it is returned exactly.
        """
        key = ("theta", order)
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        reach = 2 * order + 1
        factors: List[Factor] = []
        for m in range(1, order + 1):
            factors += [(2, m, 1), (-2, m, 1), (0, m, -2)]
        body = self._expand(factors, order, 2 * reach + 2, 1, 0)
        prefactor = half_power_difference().numerator
        coeffs = []
        for d, c in enumerate(body.coeffs):
            if c.top is not None and c.top < 2 * d + 2:
                raise WindowError(f"Theta expansion lost its q^{d} coefficient below p^{format_half(2 * d + 2)}.")
            coeffs.append(PSeries(c.coeffs) * prefactor)
        return self.cache.put(key, QSeries(coeffs))

    def theta_series(self, order: int, window: Window) -> QSeries:
        """
        Truncated Theta(p, q) on the window.

        Raises:
            WindowError: If the window does not contain [-N - 1/2, N + 1/2].
        """
        reach = 2 * order + 1
        if window.low > -reach or window.high < reach:
            raise WindowError(
                f"window too small: theta to q^{order} needs [{format_half(-reach)}, {format_half(reach)}], "
                f"got {window}."
            )
        return self.theta_exact(order).restrict(window)

    def theta_inverse(self, order: int, window: Window) -> QSeries:
        """
        1/Theta(p, q) expanded ascending in p, exact on the window.

        The q^d coefficient reaches down to p^(-d + 1/2).
        """
        key = ("theta_inverse", order, window)
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        theta = self.theta_exact(order)
        result = build_with_slack(lambda working: theta.invert(working.high), window, 4 * order + 2,
                                  lambda s, w: s.restrict(w))
        return self.cache.put(key, result)

    # -- named checks -------------------------------------------------

    def theta_inversion_check(self, order: int) -> List[QMismatch]:
        """Theta(p^-1) = -Theta(p), coefficientwise on exact polynomials."""
        theta = self.theta_exact(order)
        return theta.substitute_inverse_p().mismatches(-theta)

    def theta_sum_check(self, order: int) -> List[QMismatch]:
        """eta^3 Theta against sum_n (-1)^n q^((n+1/2)^2/2) p^(n+1/2), both with offset q^(1/8)."""
        product = self.eta_series(order, 3) * self.theta_exact(order)
        terms: Dict[int, Dict[HalfExp, Fraction]] = {}
        n = 0
        while n * (n + 1) // 2 <= order:
            for m in {n, -n - 1}:
                d = m * (m + 1) // 2
                terms.setdefault(d, {})[2 * m + 1] = Fraction((-1) ** (m % 2))
            n += 1
        theta_sum = QSeries([PSeries(terms.get(d, {})) for d in range(order + 1)], Fraction(1, 8))
        return product.mismatches(theta_sum)

    @staticmethod
    def triple_product_radius(order: int) -> int:
        """Smallest a-window holding the triple product to q^N: the largest n with C(n, 2) <= N."""
        n = 1
        while (n + 1) * n // 2 <= order:
            n += 1
        return n

    def jacobi_triple_product_a(self, order: int, radius: int) -> TripleProductResult:
        """
        Expands prod_m (1 - q^m a^-1)(1 - q^(m-1) a)(1 - q^m) and sum_n q^C(n,2) (-a)^n in the a-window.

        Raises:
            AWindowError: If a term of q-degree <= N needs an a-power outside [-R, R].
        """
        table: Dict[Tuple[int, int], int] = {(0, 0): 1}
        factors = [(-1, m) for m in range(1, order + 1)]
        factors += [(1, m - 1) for m in range(1, order + 2)]
        factors += [(0, m) for m in range(1, order + 1)]
        for s, t in factors:
            updated = dict(table)
            for (a, d), v in table.items():
                if d + t > order:
                    continue
                key = (a + s, d + t)
                updated[key] = updated.get(key, 0) - v
            table = {key: v for key, v in updated.items() if v}
        for (a, d) in table:
            if abs(a) > radius:
                raise AWindowError(
                    f"Triple product needs a^{a} at q^{d}; enlarge the a-window beyond {radius}.",
                    exponent=a, radius=radius,
                )

        sums: Dict[Tuple[int, int], int] = {}
        n = 0
        while True:
            hits = [m for m in {n, -n} if m * (m - 1) // 2 <= order]
            if not hits:
                break
            for m in hits:
                if abs(m) > radius:
                    raise AWindowError(f"Theta sum needs a^{m}; enlarge the a-window beyond {radius}.")
                sums[(m, m * (m - 1) // 2)] = (-1) ** (m % 2)
            n += 1

        product = self._graded(table, order, radius)
        theta_sum = self._graded(sums, order, radius)
        mismatches = product.mismatches(theta_sum)
        logger.info("Triple product to q^%d, R=%d: %d mismatches", order, radius, len(mismatches))
        return TripleProductResult(product, theta_sum, mismatches)

    @staticmethod
    def _graded(table: Dict[Tuple[int, int], int], order: int, radius: int) -> AGradedSeries:
        rows: Dict[int, Dict[int, PSeries]] = {}
        for (a, d), v in table.items():
            rows.setdefault(a, {})[d] = PSeries({0: v})
        return AGradedSeries({a: QSeries.from_terms(order, row) for a, row in rows.items()}, radius, order)
