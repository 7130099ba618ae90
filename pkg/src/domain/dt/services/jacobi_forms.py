from fractions import Fraction
from typing import Dict

from src.domain.series.models.pseries import PSeries
from src.domain.series.models.qseries import QSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import HalfExp, Window
from src.domain.series.services.product_service import divisor_pairs


def wp_series(order: int, window: Window) -> QSeries:
    """
    Weierstrass p-function: 1/12 + p/(1-p)^2 + sum_d sum_(k|d) k (p^k - 2 + p^-k) q^d.

    The q^0 term is expanded ascending up to the window top; the others are exact.
    """
    table: Dict[int, Dict[HalfExp, Fraction]] = {}
    for d, k in divisor_pairs(order):
        row = table.setdefault(d, {})
        for e, c in ((2 * k, k), (0, -2 * k), (-2 * k, k)):
            row[e] = row.get(e, Fraction(0)) + c
    rows = {d: RationalLaurent(PSeries(row)) for d, row in table.items()}
    rows[0] = RationalLaurent.constant(Fraction(1, 12)) + RationalLaurent(PSeries.monomial(2), {1: 2})
    return QSeries.from_rational(order, rows, window.high)


def g2_series(order: int) -> QSeries:
    """Eisenstein series G2 = -1/24 + sum_d sigma(d) q^d."""
    sigma: Dict[int, int] = {}
    for d, k in divisor_pairs(order):
        sigma[d] = sigma.get(d, 0) + k
    terms = {d: PSeries({0: s}) for d, s in sigma.items()}
    terms[0] = PSeries({0: Fraction(-1, 24)})
    return QSeries.from_terms(order, terms)
