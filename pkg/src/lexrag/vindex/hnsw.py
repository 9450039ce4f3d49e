"""Hierarchical navigable small-world graph for approximate cosine search.

Node levels are sampled geometrically from a seeded generator; insertion
greedy-descends from the top layer, then runs a best-first beam of
ef_construction candidates at each layer at or below the node's level,
keeping the nearest-M neighbors. Search greedy-descends to layer 0 and
finishes with a best-first beam of ef_search candidates.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .similarity import SearchHit, VectorStore


@dataclass
class HnswParams:
    m: int = 16
    ef_construction: int = 200
    ef_search: int = 64
    level_lambda: float | None = None  # defaults to 1/ln(m)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.ef_construction < self.m:
            raise ValueError(
                f"ef_construction ({self.ef_construction}) must be >= m ({self.m})"
            )
        if self.ef_search < 1:
            raise ValueError(f"ef_search must be >= 1, got {self.ef_search}")
        if self.level_lambda is None:
            self.level_lambda = 1.0 / math.log(self.m)
        elif self.level_lambda <= 0:
            raise ValueError(f"level_lambda must be > 0, got {self.level_lambda}")


class HnswIndex:
    kind = "hnsw"

    def __init__(self, dim: int, params: HnswParams):
        self.store = VectorStore(dim)
        self.params = params
        self.levels: list[int] = []
        # per node, per layer <= node level: neighbor vec_id lists
        self.neighbors: list[list[list[int]]] = []
        self.entry_point: int = -1
        self._rng = np.random.Generator(np.random.PCG64(params.seed))
        # denser base layer, per the usual HNSW convention; needed to hit the
        # recall target with plain nearest-M selection
        self._m0 = 2 * params.m

    def _max_degree(self, layer: int) -> int:
        return self._m0 if layer == 0 else self.params.m

    @property
    def dim(self) -> int:
        return self.store.dim

    def __len__(self) -> int:
        return len(self.store)

    def _draw_level(self) -> int:
        u = 1.0 - self._rng.random()  # (0, 1], so log is finite
        return int(-math.log(u) * self.params.level_lambda)

    def _greedy_descent(self, q: np.ndarray, ep: int, ep_sim: float, layer: int) -> tuple[int, float]:
        mat = self.store.matrix
        while True:
            nbrs = self.neighbors[ep][layer]
            if not nbrs:
                return ep, ep_sim
            sims = mat[nbrs] @ q
            best_pos = int(np.argmax(sims))
            best_sim = float(sims[best_pos])
            if best_sim <= ep_sim:
                return ep, ep_sim
            ep, ep_sim = nbrs[best_pos], best_sim

    def _search_layer(
        self, q: np.ndarray, entry: list[tuple[float, int]], ef: int, layer: int
    ) -> list[tuple[float, int]]:
        """Best-first beam; returns an unsorted list of (sim, vec_id) of size
        <= ef. Heap keys break similarity ties on vec_id for determinism."""
        mat = self.store.matrix
        visited = {vid for _, vid in entry}
        candidates = [(-sim, vid) for sim, vid in entry]
        heapq.heapify(candidates)
        results = list(entry)
        heapq.heapify(results)
        while len(results) > ef:
            heapq.heappop(results)
        worst = results[0][0]
        full = len(results) >= ef
        while candidates:
            neg_sim, vid = heapq.heappop(candidates)
            if full and -neg_sim < worst:
                break
            nbrs = self.neighbors[vid][layer] if layer < len(self.neighbors[vid]) else []
            fresh = [nb for nb in nbrs if nb not in visited]
            if not fresh:
                continue
            visited.update(fresh)
            sims = mat[fresh] @ q
            for nb, sim in zip(fresh, sims.tolist()):
                if not full:
                    heapq.heappush(results, (sim, nb))
                    heapq.heappush(candidates, (-sim, nb))
                    full = len(results) >= ef
                    worst = results[0][0]
                elif sim > worst:
                    heapq.heapreplace(results, (sim, nb))
                    heapq.heappush(candidates, (-sim, nb))
                    worst = results[0][0]
        return results

    def _select_nearest(self, pool: list[tuple[float, int]], count: int) -> list[int]:
        ranked = sorted(pool, key=lambda t: (-t[0], t[1]))
        return [vid for _, vid in ranked[:count]]

    def _trim(self, vid: int, layer: int) -> None:
        ids = self.neighbors[vid][layer]
        cap = self._max_degree(layer)
        if len(ids) <= cap:
            return
        sims = self.store.matrix[ids] @ self.store.matrix[vid]
        self.neighbors[vid][layer] = self._select_nearest(
            list(zip(sims.tolist(), ids)), cap
        )

    def insert_one(self, chunk_id: str, vector: np.ndarray) -> int:
        vec_id = self.store.add(chunk_id, vector)
        level = self._draw_level()
        self.levels.append(level)
        self.neighbors.append([[] for _ in range(level + 1)])
        if self.entry_point < 0:
            self.entry_point = vec_id
            return vec_id

        mat = self.store.matrix
        q = mat[vec_id]
        ep = self.entry_point
        ep_sim = float(mat[ep] @ q)
        top = self.levels[self.entry_point]
        for layer in range(top, level, -1):
            ep, ep_sim = self._greedy_descent(q, ep, ep_sim, layer)
        entry = [(ep_sim, ep)]
        for layer in range(min(level, top), -1, -1):
            found = self._search_layer(q, entry, self.params.ef_construction, layer)
            chosen = self._select_nearest(found, self._max_degree(layer))
            self.neighbors[vec_id][layer] = chosen
            for nb in chosen:
                self.neighbors[nb][layer].append(vec_id)
                self._trim(nb, layer)
            entry = found
        if level > top:
            self.entry_point = vec_id
        return vec_id

    def insert(self, records: list[tuple[str, np.ndarray]]) -> list[int]:
        return [self.insert_one(chunk_id, vec) for chunk_id, vec in records]

    def search(self, query: np.ndarray, k: int, ef_search: int | None = None) -> list[SearchHit]:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if ef_search is None:
            ef_search = self.params.ef_search
        if ef_search < k:
            raise ValueError(f"ef_search ({ef_search}) must be >= k ({k})")
        if self.entry_point < 0:
            return []
        q = np.asarray(query, dtype=np.float32)
        if q.shape != (self.dim,):
            raise ValueError(
                f"query dimension {q.shape} does not match index dimension {self.dim}"
            )
        mat = self.store.matrix
        ep = self.entry_point
        ep_sim = float(mat[ep] @ q)
        for layer in range(self.levels[ep], 0, -1):
            ep, ep_sim = self._greedy_descent(q, ep, ep_sim, layer)
        found = self._search_layer(q, [(ep_sim, ep)], ef_search, 0)
        ranked = sorted(found, key=lambda t: (-t[0], t[1]))[:k]
        return [
            SearchHit(chunk_id=self.store.chunk_ids[vid], score=float(sim), vec_id=vid)
            for sim, vid in ranked
        ]


def hnsw_build(records: list[tuple[str, np.ndarray]], dim: int, params: HnswParams) -> HnswIndex:
    index = HnswIndex(dim, params)
    index.insert(records)
    return index
