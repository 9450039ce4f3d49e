"""Per-domain partitioned index with deterministic fan-out and merge."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional

import numpy as np

from ..corpus.domains import DomainLabel
from .flat import FlatIndex
from .hnsw import HnswParams, hnsw_build
from .ivf import IvfParams, ivf_build
from .pq import PqParams, ivf_pq_build
from .similarity import SearchHit

INDEX_KINDS = ("flat", "ivf", "ivf_pq", "hnsw")


class PartitionedIndex:
    """One sub-index per legal domain under a single router.

    All partitions share the index kind and dimension; every chunk_id lives in
    exactly one partition.
    """

    def __init__(
        self,
        index_kind: str,
        dim: int,
        provider_fingerprint: str,
        partitions: dict[DomainLabel, object] | None = None,
        metadata: dict | None = None,
    ):
        if index_kind not in INDEX_KINDS:
            raise ValueError(f"unknown index kind: {index_kind!r}")
        self.index_kind = index_kind
        self.dim = dim
        self.provider_fingerprint = provider_fingerprint
        self.partitions: dict[DomainLabel, object] = dict(partitions or {})
        self.metadata: dict = metadata or {}
        for label, index in self.partitions.items():
            if index.kind != index_kind or index.dim != dim:
                raise ValueError(
                    f"partition {label} does not match index kind/dim "
                    f"({index.kind}, {index.dim})"
                )

    def __len__(self) -> int:
        return sum(len(p) for p in self.partitions.values())

    def chunk_count(self) -> int:
        return len(self)

    def search(
        self,
        query: np.ndarray,
        k: int,
        domains: Optional[Iterable[DomainLabel]] = None,
        parallel: bool = False,
        **search_kwargs,
    ) -> list[SearchHit]:
        """Fan out to the selected partitions, merge, re-sort globally and
        truncate to k. Merge order is deterministic regardless of completion
        order: score descending, then vec_id, then chunk_id."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if domains is None:
            selected = sorted(self.partitions, key=lambda d: d.value)
        else:
            requested = {DomainLabel(d) for d in domains}
            unknown = requested - set(self.partitions)
            if unknown:
                raise ValueError(
                    f"unknown domain label(s): {sorted(d.value for d in unknown)}"
                )
            selected = sorted(requested, key=lambda d: d.value)
        selected = [d for d in selected if len(self.partitions[d]) > 0]
        if not selected:
            return []

        def _one(label: DomainLabel) -> list[SearchHit]:
            return self.partitions[label].search(query, k, **search_kwargs)

        if parallel and len(selected) > 1:
            with ThreadPoolExecutor(max_workers=len(selected)) as pool:
                parts = list(pool.map(_one, selected))
        else:
            parts = [_one(label) for label in selected]
        merged = [hit for hits in parts for hit in hits]
        merged.sort(key=lambda h: (-h.score, h.vec_id, h.chunk_id))
        return merged[:k]

    def domain_of(self, chunk_id: str) -> Optional[DomainLabel]:
        if not hasattr(self, "_domain_map"):
            self._domain_map = {
                cid: label
                for label, index in self.partitions.items()
                for cid in index.store.chunk_ids
            }
        return self._domain_map.get(chunk_id)


def partition_search(
    pindex: PartitionedIndex,
    query: np.ndarray,
    k: int,
    domains: Optional[Iterable[DomainLabel]] = None,
    **search_kwargs,
) -> list[SearchHit]:
    return pindex.search(query, k, domains=domains, **search_kwargs)


def build_partitioned_index(
    grouped: dict[DomainLabel, list[tuple[str, np.ndarray]]],
    index_kind: str,
    dim: int,
    provider_fingerprint: str,
    ivf_params: IvfParams | None = None,
    pq_params: PqParams | None = None,
    hnsw_params: HnswParams | None = None,
    keep_raw: bool = True,
    metadata: dict | None = None,
) -> PartitionedIndex:
    """Build one sub-index per domain. Domains with no records are skipped;
    IVF cluster counts are clamped to small partitions' sizes."""
    seen: set[str] = set()
    for label, records in grouped.items():
        for chunk_id, _ in records:
            if chunk_id in seen:
                raise ValueError(f"chunk_id {chunk_id!r} appears in multiple partitions")
            seen.add(chunk_id)

    partitions: dict[DomainLabel, object] = {}
    for label, records in grouped.items():
        if not records:
            continue
        if index_kind == "flat":
            partitions[label] = FlatIndex.build(records, dim)
        elif index_kind == "ivf":
            params = ivf_params or IvfParams()
            params = _clamp_nlist(params, len(records))
            partitions[label] = ivf_build(records, dim, params)
        elif index_kind == "ivf_pq":
            params = _clamp_nlist(ivf_params or IvfParams(), len(records))
            partitions[label] = ivf_pq_build(
                records, dim, params, pq_params or PqParams(), keep_raw=keep_raw
            )
        elif index_kind == "hnsw":
            partitions[label] = hnsw_build(records, dim, hnsw_params or HnswParams())
        else:
            raise ValueError(f"unknown index kind: {index_kind!r}")
    return PartitionedIndex(index_kind, dim, provider_fingerprint, partitions, metadata)


def _clamp_nlist(params: IvfParams, count: int) -> IvfParams:
    if params.nlist <= count:
        return params
    nlist = max(1, count)
    return IvfParams(
        nlist=nlist,
        nprobe=min(params.nprobe, nlist),
        kmeans_iters=params.kmeans_iters,
        seed=params.seed,
    )
