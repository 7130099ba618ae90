from src.domain.partitions.models.partition import LegTriple, Partition
from src.domain.schur.models.varlist import VarList
from src.domain.schur.services.schur_service import SchurService
from src.domain.series.models.pseries import PSeries
from src.domain.series.models.rational_laurent import RationalLaurent
from src.domain.series.models.window import HalfExp
from src.domain.series.services.product_service import ProductService
from src.utils.logger import Logger

logger = Logger(__name__)


class VertexService:
    """The topological vertex through the skew Schur formula."""

    def __init__(self, schur_service: SchurService, product_service: ProductService):
        self.schur_service = schur_service
        self.product_service = product_service

    def vertex_rational(self, legs: LegTriple) -> RationalLaurent:
        """
        V_{lambda mu nu} / M(p) as an exact rational function:

        p^(-(||lambda||^2 + ||mu'||^2 + ||nu||^2)/2) s_{nu'}(p^-rho)
            * sum_eta s_{lambda'/eta}(p^(-nu-rho)) s_{mu/eta}(p^(-nu'-rho)).
        """
        lam, mu, nu = legs.as_tuple()
        key = ("vertex", legs)
        cached = self.schur_service.cache.get(key)
        if cached is not None:
            return cached
        lam_t, nu_t = lam.conjugate(), nu.conjugate()
        first, second = VarList.principal(nu), VarList.principal(nu_t)
        total = RationalLaurent.zero()
        for eta in lam_t.subpartitions():
            if not mu.contains(eta):
                continue
            term = self.schur_service.skew_schur_exact(lam_t, eta, first)
            if term.is_zero():
                continue
            total = total + term * self.schur_service.skew_schur_exact(mu, eta, second)
        prefactor = self.schur_service.skew_schur_exact(nu_t, Partition(), VarList.principal())
        shift = -(lam.norm2 + mu.conjugate().norm2 + nu.norm2)
        value = (total * prefactor).shift(shift).reduce()
        logger.debug("Vertex %s / M(p) = %s", legs, value)
        return self.schur_service.cache.put(key, value)

    def times_macmahon(self, value: RationalLaurent, top: HalfExp) -> PSeries:
        """M(p) * value, exact up to p^(top/2)."""
        if value.is_zero():
            return PSeries.zero(top)
        low = value.numerator.valuation()
        if top < low:
            return PSeries({}, top, top)
        return (value.expand(top) * self.product_service.macmahon(top - low)).truncate(top)

    def vertex_orv(self, legs: LegTriple, top: HalfExp) -> PSeries:
        """V_{lambda mu nu}(p) up to p^(top/2)."""
        return self.times_macmahon(self.vertex_rational(legs), top)
