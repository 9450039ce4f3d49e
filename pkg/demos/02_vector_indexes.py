"""Build and compare the four index kinds on synthetic unit vectors: exact
flat scan, IVF posting lists, IVF+PQ codes, and the HNSW graph.

Run from the repository root:  python demos/02_vector_indexes.py
"""

import time

import numpy as np

from lexrag.vindex import (
    FlatIndex,
    HnswParams,
    IvfParams,
    PqParams,
    hnsw_build,
    ivf_build,
    ivf_pq_build,
)

rng = np.random.Generator(np.random.PCG64(42))
n, dim = 20_000, 64
vectors = rng.normal(size=(n, dim)).astype(np.float32)
vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
records = [(f"chunk:{i}", vectors[i]) for i in range(n)]
queries = rng.normal(size=(50, dim)).astype(np.float32)
queries /= np.linalg.norm(queries, axis=1, keepdims=True)

print(f"corpus: {n} unit vectors, d={dim}\n")

flat = FlatIndex.build(records, dim)
truth = [frozenset(h.chunk_id for h in flat.search(q, 10)) for q in queries]


def measure(name, index, **kwargs):
    laps, recall = [], 0.0
    for q, expected in zip(queries, truth):
        t0 = time.perf_counter()
        hits = index.search(q, 10, **kwargs)
        laps.append((time.perf_counter() - t0) * 1000)
        recall += len(frozenset(h.chunk_id for h in hits) & expected) / 10
    laps.sort()
    print(f"  {name:24s} recall@10={recall / len(queries):5.3f}  "
          f"p50={laps[len(laps) // 2]:6.2f} ms")


measure("flat (oracle)", flat)

t0 = time.perf_counter()
ivf = ivf_build(records, dim, IvfParams(nlist=64, nprobe=8, seed=0))
print(f"\nIVF build: {time.perf_counter() - t0:.1f}s")
for nprobe in (1, 4, 8, 32, 64):
    measure(f"ivf nprobe={nprobe}", ivf, nprobe=nprobe)

t0 = time.perf_counter()
ivfpq = ivf_pq_build(records, dim, IvfParams(nlist=64, nprobe=8, seed=0),
                     PqParams(m=8, bits=8, seed=0))
print(f"\nIVF+PQ build: {time.perf_counter() - t0:.1f}s")
measure("ivf_pq nprobe=8", ivfpq, nprobe=8)

t0 = time.perf_counter()
hnsw = hnsw_build(records, dim, HnswParams(m=16, ef_construction=100, seed=0))
print(f"\nHNSW build: {time.perf_counter() - t0:.1f}s")
for ef in (16, 64, 128):
    measure(f"hnsw ef_search={ef}", hnsw, ef_search=ef)
