"""Latency benchmarking by query complexity and the index-technique
comparison harness."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..rag.pipeline import Query, RagPipeline
from ..vindex.flat import FlatIndex
from ..vindex.hnsw import HnswParams, hnsw_build
from ..vindex.ivf import IvfParams, ivf_build
from ..vindex.pq import PqParams, ivf_pq_build
from .dataset import Complexity

LATENCY_CSV_HEADER = "QueryComplexityLevel,ProcessingTime"


@dataclass(frozen=True)
class LatencyStats:
    p50: float
    p95: float
    mean: float


def _percentile(sorted_values: Sequence[float], q: float) -> float:
    if not sorted_values:
        return 0.0
    pos = q * (len(sorted_values) - 1)
    lo = int(pos)
    hi = min(lo + 1, len(sorted_values) - 1)
    frac = pos - lo
    return sorted_values[lo] * (1 - frac) + sorted_values[hi] * frac


def _stats(values: Sequence[float]) -> LatencyStats:
    ordered = sorted(values)
    return LatencyStats(
        p50=_percentile(ordered, 0.50),
        p95=_percentile(ordered, 0.95),
        mean=sum(ordered) / len(ordered),
    )


@dataclass
class LatencyReport:
    per_level: dict[str, dict[str, LatencyStats]]  # level -> phase -> stats
    rows: list[tuple[str, float]]  # (complexity level, total ms) per timed run
    metadata: dict = field(default_factory=dict)

    def mean_total(self, level: Complexity | str) -> float:
        return self.per_level[str(Complexity(level))]["total"].mean

    def write_csv(self, path: str | Path) -> Path:
        p = Path(path)
        lines = [LATENCY_CSV_HEADER]
        lines += [f"{level},{ms:.3f}" for level, ms in self.rows]
        p.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return p


def latency_benchmark(
    pipeline: RagPipeline,
    samples_by_complexity: dict[Complexity, list[Query]],
    repetitions: int = 10,
    warmup: int = 3,
) -> LatencyReport:
    """Wall-clock distributions per complexity level, split into embed,
    retrieve and generate phases.

    Queries run sequentially with the cache bypassed, so the benchmark leaves
    the pipeline's indexes and cache untouched.
    """
    if repetitions < 10:
        raise ValueError(f"repetitions must be >= 10, got {repetitions}")
    if warmup < 0:
        raise ValueError("warmup must be >= 0")
    per_level: dict[str, dict[str, LatencyStats]] = {}
    rows: list[tuple[str, float]] = []
    for complexity in Complexity:
        queries = samples_by_complexity.get(complexity)
        if queries is None:
            continue
        if not queries:
            raise ValueError(f"no queries for complexity level {complexity}")
        phases: dict[str, list[float]] = {
            "embed": [], "retrieve": [], "generate": [], "total": [],
        }
        for query in queries:
            for _ in range(warmup):
                pipeline.answer_query(query, use_cache=False)
            for _ in range(repetitions):
                t0 = time.perf_counter()
                answer = pipeline.answer_query(query, use_cache=False)
                total_ms = (time.perf_counter() - t0) * 1000.0
                phases["embed"].append(answer.retrieval.embed_latency_ms)
                phases["retrieve"].append(answer.retrieval.retrieval_latency_ms)
                phases["generate"].append(answer.generation_latency_ms)
                phases["total"].append(total_ms)
                rows.append((str(complexity), total_ms))
        per_level[str(complexity)] = {name: _stats(vals) for name, vals in phases.items()}
    return LatencyReport(
        per_level=per_level,
        rows=rows,
        metadata={
            "repetitions": repetitions,
            "warmup_excluded": warmup,
            "execution": "sequential single-query",
        },
    )


def estimate_memory_bytes(index) -> int:
    """Rough resident size of the searchable structures."""
    total = 0
    if index.kind != "ivf_pq" or index.keep_raw:
        total += index.store.matrix.nbytes
    if index.kind in ("ivf", "ivf_pq"):
        total += index.centroids.nbytes
        total += sum(p.nbytes for p in index.posting_lists)
    if index.kind == "ivf_pq":
        total += index.codebooks.nbytes + index.codes.nbytes
    if index.kind == "hnsw":
        total += sum(
            4 * len(ids) for node_layers in index.neighbors for ids in node_layers
        )
    return total


@dataclass(frozen=True)
class IndexConfig:
    """One row of the comparison: an index kind plus its parameters."""

    kind: str
    name: str = ""
    ivf_params: Optional[IvfParams] = None
    pq_params: Optional[PqParams] = None
    hnsw_params: Optional[HnswParams] = None
    keep_raw: bool = True
    search_kwargs: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return self.name or self.kind


def default_comparison_configs(seed: int = 0) -> list[IndexConfig]:
    """The shipped comparison suite: a flat baseline, the combined
    IVF/IVF+PQ/HNSW family, and an HNSW-only configuration."""
    return [
        IndexConfig(kind="flat", name="flat (exact baseline)"),
        IndexConfig(
            kind="ivf", name="suite: ivf",
            ivf_params=IvfParams(nlist=16, nprobe=4, seed=seed),
        ),
        IndexConfig(
            kind="ivf_pq", name="suite: ivf+pq",
            ivf_params=IvfParams(nlist=16, nprobe=4, seed=seed),
            pq_params=PqParams(m=8, bits=6, seed=seed),
        ),
        IndexConfig(
            kind="hnsw", name="suite: hnsw",
            hnsw_params=HnswParams(m=16, ef_construction=100, ef_search=64, seed=seed),
        ),
        IndexConfig(
            kind="hnsw", name="hnsw-only",
            hnsw_params=HnswParams(m=16, ef_construction=100, ef_search=64, seed=seed),
        ),
    ]


def _build_for_config(config: IndexConfig, records, dim: int):
    if config.kind == "flat":
        return FlatIndex.build(records, dim)
    if config.kind == "ivf":
        return ivf_build(records, dim, config.ivf_params or IvfParams())
    if config.kind == "ivf_pq":
        return ivf_pq_build(
            records, dim,
            config.ivf_params or IvfParams(),
            config.pq_params or PqParams(),
            keep_raw=config.keep_raw,
        )
    if config.kind == "hnsw":
        return hnsw_build(records, dim, config.hnsw_params or HnswParams())
    raise ValueError(f"unknown index kind: {config.kind!r}")


def compare_indexes(
    configs: Sequence[IndexConfig],
    records: list[tuple[str, np.ndarray]],
    queries: Sequence[np.ndarray],
    k: int = 10,
) -> list[dict]:
    """Build each configured index over the same records and measure
    recall@k against the flat oracle plus p50/p95 latency and memory."""
    if not records:
        raise ValueError("cannot compare indexes over zero records")
    dim = int(np.asarray(records[0][1]).shape[0])
    oracle = FlatIndex.build(records, dim)
    truth = [frozenset(h.chunk_id for h in oracle.search(q, k)) for q in queries]

    rows: list[dict] = []
    for config in configs:
        index = _build_for_config(config, records, dim)
        latencies: list[float] = []
        recall_sum = 0.0
        for q, expected in zip(queries, truth):
            t0 = time.perf_counter()
            hits = index.search(q, k, **config.search_kwargs)
            latencies.append((time.perf_counter() - t0) * 1000.0)
            if expected:
                found = frozenset(h.chunk_id for h in hits)
                recall_sum += len(found & expected) / len(expected)
        stats = _stats(latencies)
        rows.append(
            {
                "kind": config.kind,
                "name": config.label,
                "params": _describe_params(config),
                "recall_at_k": recall_sum / len(truth) if truth else 0.0,
                "p50_ms": stats.p50,
                "p95_ms": stats.p95,
                "memory_bytes": estimate_memory_bytes(index),
            }
        )
    return rows


def _describe_params(config: IndexConfig) -> dict:
    params: dict = {}
    if config.ivf_params is not None:
        params["nlist"] = config.ivf_params.nlist
        params["nprobe"] = config.ivf_params.nprobe
    if config.pq_params is not None:
        params["m"] = config.pq_params.m
        params["bits"] = config.pq_params.bits
        params["keep_raw"] = config.keep_raw
    if config.hnsw_params is not None:
        params["M"] = config.hnsw_params.m
        params["ef_construction"] = config.hnsw_params.ef_construction
        params["ef_search"] = config.hnsw_params.ef_search
    params.update(config.search_kwargs)
    return params
