from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from src.domain.dt.services.dt_service import DtService
from src.domain.fock.services.check_service import FockCheckService
from src.domain.fock.services.operator_service import OperatorService
from src.domain.fock.services.trace_service import TraceService
from src.domain.identities.services.bloch_okounkov_service import BlochOkounkovService
from src.domain.identities.services.identity_service import IdentityService
from src.domain.partitions.services.enumeration_service import EnumerationService
from src.domain.schur.services.schur_service import SchurService
from src.domain.schur.services.vertex_service import VertexService
from src.domain.series.repositories.series_cache import SeriesCache
from src.domain.series.services.product_service import ProductService


@dataclass(frozen=True)
class Services:
    """Every service wired to one shared series cache."""

    products: ProductService
    schur: SchurService
    vertex: VertexService
    enumeration: EnumerationService
    fock: FockCheckService
    identities: IdentityService
    bloch_okounkov: BlochOkounkovService
    dt: DtService


def build_services(cache: Optional[SeriesCache] = None) -> Services:
    cache = cache if cache is not None else SeriesCache()
    products = ProductService(cache)
    schur = SchurService(cache)
    vertex = VertexService(schur, products)
    enumeration = EnumerationService()
    operators = OperatorService(schur, cache)
    traces = TraceService(operators, products)
    fock = FockCheckService(operators, traces, vertex, products)
    identities = IdentityService(vertex, products, enumeration, fock)
    bloch_okounkov = BlochOkounkovService(schur, products, identities)
    dt = DtService(products, identities)
    return Services(products, schur, vertex, enumeration, fock, identities, bloch_okounkov, dt)


@lru_cache(maxsize=1)
def get_services() -> Services:
    """Provides the process-wide service container."""
    return build_services()
