"""Product quantization: per-subspace codebooks, compact codes, and
asymmetric-distance search over an IVF-partitioned corpus."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .ivf import IvfParams
from .kmeans import kmeans
from .similarity import SearchHit, VectorStore, rank_top_k


@dataclass
class PqParams:
    m: int = 8
    bits: int = 8
    kmeans_iters: int = 25
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not 1 <= self.bits <= 12:
            raise ValueError(f"bits must be in [1, 12], got {self.bits}")
        if self.kmeans_iters < 1:
            raise ValueError(f"kmeans_iters must be >= 1, got {self.kmeans_iters}")

    @property
    def ncodes(self) -> int:
        return 1 << self.bits


def pq_train(vectors: np.ndarray, params: PqParams) -> np.ndarray:
    """Train per-subspace codebooks; returns (m, 2**bits, d/m) float32.

    Sub-codebooks with fewer training points than centroids are padded by
    cycling the trained centroids so the codebook shape stays fixed.
    """
    vectors = np.ascontiguousarray(vectors, dtype=np.float32)
    n, d = vectors.shape
    if d % params.m != 0:
        raise ValueError(f"dimension {d} is not divisible by m={params.m}")
    if n < params.ncodes:
        warnings.warn(
            f"training set has {n} vectors; >= {params.ncodes} per subspace is "
            "recommended",
            stacklevel=2,
        )
    dsub = d // params.m
    codebooks = np.zeros((params.m, params.ncodes, dsub), dtype=np.float32)
    for j in range(params.m):
        sub = vectors[:, j * dsub : (j + 1) * dsub]
        k = min(params.ncodes, n)
        centroids, _ = kmeans(sub, k, iters=params.kmeans_iters, seed=params.seed + j)
        codebooks[j, :k] = centroids
        for pad in range(k, params.ncodes):
            codebooks[j, pad] = centroids[pad % k]
    return codebooks


def pq_encode(codebooks: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Map each d/m-dim sub-vector to its nearest codebook centroid id."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float32))
    m, ncodes, dsub = codebooks.shape
    if vectors.shape[1] != m * dsub:
        raise ValueError(
            f"vector dimension {vectors.shape[1]} does not match codebooks "
            f"({m} x {dsub})"
        )
    codes = np.zeros((vectors.shape[0], m), dtype=np.uint16)
    for j in range(m):
        sub = vectors[:, j * dsub : (j + 1) * dsub]
        book = codebooks[j]
        d2 = (
            np.einsum("ij,ij->i", sub, sub)[:, None]
            - 2.0 * (sub @ book.T)
            + np.einsum("ij,ij->i", book, book)[None, :]
        )
        codes[:, j] = np.argmin(d2, axis=1)
    return codes


def pq_decode(codebooks: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Reconstruct vectors from codes (centroid concatenation)."""
    codes = np.atleast_2d(codes)
    m, _, dsub = codebooks.shape
    out = np.zeros((codes.shape[0], m * dsub), dtype=np.float32)
    for j in range(m):
        out[:, j * dsub : (j + 1) * dsub] = codebooks[j][codes[:, j]]
    return out


def adc_table(codebooks: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Per-query lookup table of sub-dot-products, shape (m, 2**bits)."""
    q = np.asarray(query, dtype=np.float32)
    m, _, dsub = codebooks.shape
    return np.stack([codebooks[j] @ q[j * dsub : (j + 1) * dsub] for j in range(m)])


def adc_scores(table: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Approximate dot products: sum the table entries selected by each code."""
    m = table.shape[0]
    return table[np.arange(m), codes].sum(axis=1)


class IvfPqIndex:
    """IVF coarse pruning plus PQ codes; asymmetric-distance scoring with an
    optional exact re-rank from retained raw vectors (the default).

    ``keep_raw=False`` is the codes-only, memory-lean mode; its scores are ADC
    approximations of the true cosine.
    """

    kind = "ivf_pq"

    def __init__(self, dim: int, ivf_params: IvfParams, pq_params: PqParams,
                 keep_raw: bool = True):
        if dim % pq_params.m != 0:
            raise ValueError(f"dimension {dim} is not divisible by m={pq_params.m}")
        self.store = VectorStore(dim)
        self.ivf_params = ivf_params
        self.pq_params = pq_params
        self.keep_raw = keep_raw
        self.centroids = np.zeros((0, dim), dtype=np.float32)
        self.codebooks = np.zeros((pq_params.m, pq_params.ncodes, dim // pq_params.m),
                                  dtype=np.float32)
        self.codes = np.zeros((0, pq_params.m), dtype=np.uint16)
        self.posting_lists: list[np.ndarray] = []
        self.trained = False

    @property
    def dim(self) -> int:
        return self.store.dim

    @property
    def nlist(self) -> int:
        return len(self.posting_lists)

    def __len__(self) -> int:
        return len(self.store)

    def search(self, query: np.ndarray, k: int, nprobe: int | None = None,
               rerank_factor: int = 4) -> list[SearchHit]:
        if not self.trained:
            raise ValueError("IVF+PQ index searched before codebooks were trained")
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if nprobe is None:
            nprobe = self.ivf_params.nprobe
        if not 1 <= nprobe <= self.nlist:
            raise ValueError(f"nprobe must be in [1, {self.nlist}], got {nprobe}")
        q = np.asarray(query, dtype=np.float32)
        if q.shape != (self.dim,):
            raise ValueError(
                f"query dimension {q.shape} does not match index dimension {self.dim}"
            )
        sims = self.centroids @ q
        probed = np.lexsort((np.arange(len(sims)), -sims))[:nprobe]
        vec_ids = np.concatenate([self.posting_lists[c] for c in probed])
        if vec_ids.size == 0:
            return []
        table = adc_table(self.codebooks, q)
        approx = adc_scores(table, self.codes[vec_ids])
        if not self.keep_raw:
            top = rank_top_k(approx, vec_ids, k)
            return self.store.hits_from_positions(top, approx, vec_ids)
        # shortlist by ADC, then exact re-rank so returned scores are true cosines
        shortlist = rank_top_k(approx, vec_ids, min(len(vec_ids), max(k, k * rerank_factor)))
        cand_ids = vec_ids[shortlist]
        exact = self.store.matrix[cand_ids] @ q
        top = rank_top_k(exact, cand_ids, k)
        return self.store.hits_from_positions(top, exact, cand_ids)


def ivf_pq_build(
    records: list[tuple[str, np.ndarray]],
    dim: int,
    ivf_params: IvfParams,
    pq_params: PqParams,
    keep_raw: bool = True,
) -> IvfPqIndex:
    if not records:
        raise ValueError("cannot build an IVF+PQ index from zero records")
    if ivf_params.nlist > len(records):
        raise ValueError(
            f"nlist ({ivf_params.nlist}) exceeds the record count ({len(records)})"
        )
    index = IvfPqIndex(dim, ivf_params, pq_params, keep_raw=keep_raw)
    index.store.add_many(records)
    matrix = index.store.matrix
    centroids, assignments = kmeans(
        matrix, ivf_params.nlist, iters=ivf_params.kmeans_iters,
        seed=ivf_params.seed, spherical=True,
    )
    index.centroids = centroids
    index.posting_lists = [
        np.flatnonzero(assignments == c).astype(np.int64)
        for c in range(ivf_params.nlist)
    ]
    index.codebooks = pq_train(matrix, pq_params)
    index.codes = pq_encode(index.codebooks, matrix)
    index.trained = True
    return index
