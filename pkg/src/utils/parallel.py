from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from src.config.settings import settings

A = TypeVar("A")
R = TypeVar("R")


def resolve_jobs(jobs: Optional[int] = None) -> int:
    return settings.DEFAULT_JOBS if jobs is None else max(1, jobs)


def ordered_map(fn: Callable[[A], R], items: Iterable[A], jobs: Optional[int] = None) -> List[R]:
    """
    Maps `fn` over `items` and returns the results in input order.

    With more than one job the calls run in a process pool; `fn` and the items
    must then be picklable (module-level functions, immutable values). The
    ordered reduction keeps reports identical for every job count.
    """
    items = list(items)
    jobs = resolve_jobs(jobs)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
