"""Reproduce the index-technique comparison: the combined IVF / IVF+PQ / HNSW
suite versus an HNSW-only configuration, measured against the flat oracle,
plus the latency-by-complexity benchmark and its CSV output.

Run from the repository root:  python demos/05_index_comparison.py
"""

import numpy as np

from lexrag.bundled import mini_corpus_path
from lexrag.corpus import DomainLabel, load_documents
from lexrag.embedding import HashEmbeddingProvider
from lexrag.evalkit import (
    Complexity,
    compare_indexes,
    default_comparison_configs,
    latency_benchmark,
)
from lexrag.rag import Query
from lexrag.service.engine import Engine

# --- recall / latency / memory table ----------------------------------------
rng = np.random.Generator(np.random.PCG64(9))
n, dim = 5000, 64
vectors = rng.normal(size=(n, dim)).astype(np.float32)
vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
records = [(f"c{i}", vectors[i]) for i in range(n)]
queries = [records[int(i)][1] for i in rng.integers(0, n, size=40)]

rows = compare_indexes(default_comparison_configs(seed=0), records, queries, k=10)
print(f"{'config':26s} {'recall@10':>9s} {'p50 ms':>8s} {'p95 ms':>8s} {'memory':>10s}")
for row in rows:
    print(f"{row['name']:26s} {row['recall_at_k']:9.3f} {row['p50_ms']:8.3f} "
          f"{row['p95_ms']:8.3f} {row['memory_bytes'] / 1e6:8.1f}MB")
print()

# --- latency by query complexity ----------------------------------------------
engine = Engine(HashEmbeddingProvider(256))
engine.ingest_documents(load_documents(mini_corpus_path()))
engine.build_index("flat")

one = frozenset({DomainLabel.CRIMINAL})
groups = {
    Complexity.SIMPLE: [Query(text="What is the punishment for IPC Section 420?",
                              k=3, domains=one)],
    Complexity.MODERATE: [Query(text="What are the punishments for theft, robbery "
                                     "and cheating under the penal code?",
                                k=10, domains=one)],
    Complexity.COMPLEX: [Query(text="How do cheating punishments, breach of "
                                    "contract remedies and free speech "
                                    "restrictions interact in one dispute?",
                               k=10, domains=None)],
}
benchmark = latency_benchmark(engine.pipeline, groups, repetitions=20, warmup=3)
for level in ("Simple", "Moderate", "Complex"):
    stats = benchmark.per_level[level]
    print(f"{level:9s} total mean={stats['total'].mean:7.3f} ms  "
          f"(embed={stats['embed'].mean:.3f}, retrieve={stats['retrieve'].mean:.3f}, "
          f"generate={stats['generate'].mean:.3f})")

path = benchmark.write_csv("/tmp/lexrag_latency.csv")
print(f"\nwrote {len(benchmark.rows)} rows to {path} "
      "(QueryComplexityLevel,ProcessingTime)")
