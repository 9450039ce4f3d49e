"""Exhaustive exact cosine search; the ground-truth oracle for every
approximate index."""

from __future__ import annotations

import numpy as np

from .similarity import SearchHit, VectorStore, rank_top_k


class FlatIndex:
    kind = "flat"

    def __init__(self, dim: int):
        self.store = VectorStore(dim)

    @property
    def dim(self) -> int:
        return self.store.dim

    def __len__(self) -> int:
        return len(self.store)

    def insert(self, records: list[tuple[str, np.ndarray]]) -> list[int]:
        return self.store.add_many(records)

    def search(self, query: np.ndarray, k: int) -> list[SearchHit]:
        """Scan every stored vector; exactly min(k, size) hits, score
        descending with ties broken by ascending vec_id."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        q = np.asarray(query, dtype=np.float32)
        if q.shape != (self.dim,):
            raise ValueError(
                f"query dimension {q.shape} does not match index dimension {self.dim}"
            )
        n = len(self.store)
        if n == 0:
            return []
        scores = self.store.matrix @ q
        vec_ids = np.arange(n, dtype=np.int64)
        top = rank_top_k(scores, vec_ids, k)
        return self.store.hits_from_positions(top, scores, vec_ids)

    @classmethod
    def build(cls, records: list[tuple[str, np.ndarray]], dim: int) -> "FlatIndex":
        index = cls(dim)
        index.insert(records)
        return index
