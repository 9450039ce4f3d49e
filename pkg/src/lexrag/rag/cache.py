"""LRU cache for retrieval results, keyed on normalized query text + k +
the requested domain set."""

from __future__ import annotations

import threading
from collections import OrderedDict
from typing import Iterable, Optional

from ..corpus.domains import DomainLabel


def make_cache_key(text: str, k: int, domains: Optional[Iterable[DomainLabel]]) -> str:
    normalized = " ".join(text.lower().split())
    if domains is None:
        domain_part = "*"
    else:
        domain_part = ",".join(sorted(DomainLabel(d).value for d in domains))
    return f"{normalized}|k={k}|d={domain_part}"


class QueryCache:
    """Thread-safe LRU: lookups promote recency, stores evict the least
    recently used entry once capacity is reached."""

    def __init__(self, capacity: int = 1024):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._entries: OrderedDict[str, object] = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._entries)

    def lookup(self, key: str):
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                self.hits += 1
                return self._entries[key]
            self.misses += 1
            return None

    def store(self, key: str, result) -> None:
        with self._lock:
            self._entries[key] = result
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = 0
            self.misses = 0

    @property
    def stats(self) -> dict[str, int]:
        with self._lock:
            return {"hits": self.hits, "misses": self.misses, "size": len(self._entries)}
