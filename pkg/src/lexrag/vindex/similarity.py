"""Cosine similarity and shared result-ranking helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class VectorRecord:
    """A stored vector: dense vec_id, external chunk_id, unit vector."""

    vec_id: int
    chunk_id: str
    vector: np.ndarray


@dataclass(frozen=True)
class SearchHit:
    chunk_id: str
    score: float
    vec_id: int


def cosine_similarity(a, b) -> float:
    """dot(a, b) / (|a| |b|), clamped to [-1, 1] against rounding."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity is undefined for zero vectors")
    return float(np.clip(np.dot(va, vb) / (na * nb), -1.0, 1.0))


def rank_top_k(scores: np.ndarray, vec_ids: np.ndarray, k: int) -> np.ndarray:
    """Positions of the top-k scores, ordered score-descending with ties
    broken by ascending vec_id. Exact even at tied boundary scores."""
    n = scores.shape[0]
    k = min(k, n)
    if k == 0:
        return np.empty(0, dtype=np.int64)
    if k < n:
        boundary = np.partition(scores, n - k)[n - k]
        cand = np.flatnonzero(scores >= boundary)
    else:
        cand = np.arange(n)
    order = cand[np.lexsort((vec_ids[cand], -scores[cand]))]
    return order[:k]


class VectorStore:
    """Growable row matrix of float32 vectors plus the chunk-id table.

    vec_ids are dense and assigned in insertion order.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.dim = dim
        self.chunk_ids: list[str] = []
        self._matrix = np.zeros((0, dim), dtype=np.float32)
        self._count = 0

    def __len__(self) -> int:
        return self._count

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix[: self._count]

    def add(self, chunk_id: str, vector: np.ndarray) -> int:
        vec = np.asarray(vector, dtype=np.float32)
        if vec.shape != (self.dim,):
            raise ValueError(
                f"vector dimension {vec.shape} does not match index dimension {self.dim}"
            )
        if self._count == self._matrix.shape[0]:
            capacity = max(16, self._matrix.shape[0] * 2)
            grown = np.zeros((capacity, self.dim), dtype=np.float32)
            grown[: self._count] = self._matrix[: self._count]
            self._matrix = grown
        self._matrix[self._count] = vec
        self.chunk_ids.append(chunk_id)
        self._count += 1
        return self._count - 1

    def add_many(self, records: list[tuple[str, np.ndarray]]) -> list[int]:
        return [self.add(chunk_id, vec) for chunk_id, vec in records]

    def record(self, vec_id: int) -> VectorRecord:
        return VectorRecord(vec_id, self.chunk_ids[vec_id], self._matrix[vec_id])

    def hits_from_positions(
        self, positions: np.ndarray, scores: np.ndarray, vec_ids: np.ndarray
    ) -> list[SearchHit]:
        return [
            SearchHit(
                chunk_id=self.chunk_ids[int(vec_ids[p])],
                score=float(scores[p]),
                vec_id=int(vec_ids[p]),
            )
            for p in positions
        ]
