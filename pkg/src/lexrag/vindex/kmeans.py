"""Seeded k-means with k-means++ initialization.

Runs a fixed iteration count for determinism; the spherical variant keeps
centroids unit-normalized so max-dot-product assignment and nearest-Euclidean
assignment agree on unit data.
"""

from __future__ import annotations

import numpy as np


def _squared_distances(data: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # |x - c|^2 = |x|^2 - 2 x.c + |c|^2, computed blockwise to bound memory
    x_sq = np.einsum("ij,ij->i", data, data)[:, None]
    c_sq = np.einsum("ij,ij->i", centroids, centroids)[None, :]
    d2 = x_sq - 2.0 * (data @ centroids.T) + c_sq
    return np.maximum(d2, 0.0)


def kmeans_pp_init(data: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = data.shape[0]
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.integers(n)
    d2 = _squared_distances(data, data[chosen[0]][None, :])[:, 0]
    for i in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            chosen[i] = rng.integers(n)
        else:
            chosen[i] = rng.choice(n, p=d2 / total)
        d2 = np.minimum(d2, _squared_distances(data, data[chosen[i]][None, :])[:, 0])
    return data[chosen].copy()


def kmeans(
    data: np.ndarray,
    k: int,
    iters: int = 25,
    seed: int = 0,
    spherical: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Cluster ``data`` into ``k`` centroids; returns (centroids, assignments).

    Empty clusters are reseeded deterministically to the point currently
    farthest from its centroid.
    """
    data = np.ascontiguousarray(data, dtype=np.float32)
    n = data.shape[0]
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"k ({k}) exceeds the number of training points ({n})")
    rng = np.random.Generator(np.random.PCG64(seed))
    centroids = kmeans_pp_init(data, k, rng)
    if spherical:
        centroids = _normalize_rows(centroids)

    assignments = np.zeros(n, dtype=np.int64)
    for _ in range(iters):
        d2 = _squared_distances(data, centroids)
        assignments = np.argmin(d2, axis=1)
        point_d2 = d2[np.arange(n), assignments]
        for c in range(k):
            members = assignments == c
            if not members.any():
                farthest = int(np.argmax(point_d2))
                centroids[c] = data[farthest]
                assignments[farthest] = c
                point_d2[farthest] = 0.0
            else:
                centroids[c] = data[members].mean(axis=0)
        if spherical:
            centroids = _normalize_rows(centroids)

    d2 = _squared_distances(data, centroids)
    assignments = np.argmin(d2, axis=1)
    return centroids, assignments


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return (matrix / norms).astype(np.float32)
