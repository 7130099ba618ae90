import threading
from typing import Any, Callable, Dict, Hashable, Optional, TypeVar

T = TypeVar("T")


class SeriesCache:
    """
    In-memory memo table for expensive series values (Euler products, Schur
    entries, Gamma images).

    Stored values are immutable, so concurrent readers never need the lock;
    writers take it and keep whichever value landed first.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._store: Dict[Hashable, Any] = {}

    def get(self, key: Hashable) -> Optional[Any]:
        """
        Retrieves a cached value.

        Args:
            key: Hashable cache key.

        Returns:
            The cached value, or None if absent.
        """
        return self._store.get(key)

    def put(self, key: Hashable, value: T) -> T:
        """
        Stores a value unless one is already present and returns the stored one.

        Args:
            key: Hashable cache key.
            value: The value to store.

        Returns:
            The value now associated with the key.
        """
        with self._lock:
            return self._store.setdefault(key, value)

    def get_or_compute(self, key: Hashable, compute: Callable[[], T]) -> T:
        cached = self._store.get(key)
        if cached is not None:
            return cached
        return self.put(key, compute())

    def clear(self):
        with self._lock:
            self._store.clear()

    def __len__(self) -> int:
        return len(self._store)
