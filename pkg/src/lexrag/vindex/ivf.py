"""Inverted-file index: coarse k-means clustering with per-cluster posting
lists; queries scan only the nprobe most similar clusters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kmeans import kmeans
from .similarity import SearchHit, VectorStore, rank_top_k


@dataclass
class IvfParams:
    nlist: int = 16
    nprobe: int = 4
    kmeans_iters: int = 25
    seed: int = 0

    def __post_init__(self) -> None:
        if self.nlist < 1:
            raise ValueError(f"nlist must be >= 1, got {self.nlist}")
        if not 1 <= self.nprobe <= self.nlist:
            raise ValueError(
                f"nprobe must be in [1, nlist={self.nlist}], got {self.nprobe}"
            )
        if self.kmeans_iters < 1:
            raise ValueError(f"kmeans_iters must be >= 1, got {self.kmeans_iters}")


class IvfIndex:
    kind = "ivf"

    def __init__(self, dim: int, params: IvfParams):
        self.store = VectorStore(dim)
        self.params = params
        self.centroids = np.zeros((0, dim), dtype=np.float32)
        self.posting_lists: list[np.ndarray] = []

    @property
    def dim(self) -> int:
        return self.store.dim

    @property
    def nlist(self) -> int:
        return len(self.posting_lists)

    def __len__(self) -> int:
        return len(self.store)

    def _probe_order(self, q: np.ndarray, nprobe: int) -> np.ndarray:
        sims = self.centroids @ q
        order = np.lexsort((np.arange(len(sims)), -sims))
        return order[:nprobe]

    def search(self, query: np.ndarray, k: int, nprobe: int | None = None) -> list[SearchHit]:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if nprobe is None:
            nprobe = self.params.nprobe
        if not 1 <= nprobe <= self.nlist:
            raise ValueError(f"nprobe must be in [1, {self.nlist}], got {nprobe}")
        q = np.asarray(query, dtype=np.float32)
        if q.shape != (self.dim,):
            raise ValueError(
                f"query dimension {q.shape} does not match index dimension {self.dim}"
            )
        probed = self._probe_order(q, nprobe)
        vec_ids = np.concatenate([self.posting_lists[c] for c in probed])
        if vec_ids.size == 0:
            return []
        scores = self.store.matrix[vec_ids] @ q
        top = rank_top_k(scores, vec_ids, k)
        return self.store.hits_from_positions(top, scores, vec_ids)


def ivf_build(records: list[tuple[str, np.ndarray]], dim: int, params: IvfParams) -> IvfIndex:
    """Train seeded spherical k-means over the record vectors and assign each
    record to its most similar centroid's posting list."""
    if not records:
        raise ValueError("cannot build an IVF index from zero records")
    if params.nlist > len(records):
        raise ValueError(
            f"nlist ({params.nlist}) exceeds the record count ({len(records)})"
        )
    index = IvfIndex(dim, params)
    index.store.add_many(records)
    matrix = index.store.matrix
    centroids, assignments = kmeans(
        matrix, params.nlist, iters=params.kmeans_iters, seed=params.seed, spherical=True
    )
    index.centroids = centroids
    index.posting_lists = [
        np.flatnonzero(assignments == c).astype(np.int64) for c in range(params.nlist)
    ]
    return index
