"""Embedding providers: a swappable contract with a deterministic local default.

Every provider returns unit-normalized vectors of a fixed dimension, so cosine
similarity downstream reduces to a dot product.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

# Fixed feature-hash seed, recorded in index metadata so persisted indexes
# stay reproducible across processes.
DEFAULT_HASH_SEED = 0x4C455852

NORM_TOLERANCE = 1e-6


class EmbeddingError(Exception):
    """Embedding failure; carries HTTP status and latency when remote."""

    def __init__(self, message: str, status: Optional[int] = None,
                 latency_ms: Optional[float] = None):
        super().__init__(message)
        self.status = status
        self.latency_ms = latency_ms


@dataclass
class EmbeddingProviderConfig:
    kind: str = "deterministic_hash"  # deterministic_hash | remote_http
    dim: int = 1024
    seed: int = DEFAULT_HASH_SEED
    # remote-only settings
    endpoint_url: str = ""
    api_key_env_var: str = ""
    model_name: str = ""
    batch_size: int = 32
    timeout_ms: int = 10_000
    max_retries: int = 3

    def __post_init__(self) -> None:
        if self.kind not in ("deterministic_hash", "remote_http"):
            raise ValueError(f"unknown provider kind: {self.kind!r}")
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


def _check_unit(vec: np.ndarray, dim: int) -> np.ndarray:
    if vec.shape != (dim,):
        raise EmbeddingError(f"expected dimension {dim}, got {vec.shape}")
    norm = float(np.linalg.norm(vec))
    if not np.isfinite(vec).all() or abs(norm - 1.0) > NORM_TOLERANCE:
        raise EmbeddingError(f"provider output is not a unit vector (norm={norm})")
    return vec


class EmbeddingProvider:
    """Base contract: unit vectors of ``dim``, deterministic per instance."""

    dim: int
    fingerprint: str

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        raise NotImplementedError


def _features(text: str) -> list[str]:
    lowered = text.lower()
    if len(lowered) < 3:
        return list(lowered)
    return [lowered[i : i + 3] for i in range(len(lowered) - 2)]


def hash_embed(text: str, dim: int, seed: int = DEFAULT_HASH_SEED,
               _memo: Optional[dict] = None) -> np.ndarray:
    """Character-trigram feature hashing with signed buckets, L2-normalized.

    A seeded hash sends each lowercase trigram to a bucket in [0, dim) with a
    ±1 sign; inputs shorter than three characters fall back to unigrams.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if not text.strip():
        raise EmbeddingError("cannot embed empty input")
    key = seed.to_bytes(8, "little", signed=False)
    acc = np.zeros(dim, dtype=np.float64)
    for feature in _features(text):
        cached = _memo.get(feature) if _memo is not None else None
        if cached is None:
            h = int.from_bytes(
                hashlib.blake2b(feature.encode("utf-8"), key=key, digest_size=8).digest(),
                "little",
            )
            cached = (h % dim, 1.0 if h & (1 << 63) == 0 else -1.0)
            if _memo is not None:
                _memo[feature] = cached
        bucket, sign = cached
        acc[bucket] += sign
    norm = float(np.linalg.norm(acc))
    if norm == 0.0:
        raise EmbeddingError("hashed features cancelled out to the zero vector")
    return (acc / norm).astype(np.float32)


class HashEmbeddingProvider(EmbeddingProvider):
    """Deterministic offline provider: seed + text fully determine the output."""

    def __init__(self, dim: int = 1024, seed: int = DEFAULT_HASH_SEED):
        if dim < 2:
            raise ValueError(f"dim must be >= 2, got {dim}")
        self.dim = dim
        self.seed = seed
        self.fingerprint = f"deterministic_hash:d{dim}:seed=0x{seed:X}"
        self._memo: dict[str, tuple[int, float]] = {}

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for i, text in enumerate(texts):
            if not text.strip():
                raise EmbeddingError(f"cannot embed empty input (index {i})")
            out.append(_check_unit(hash_embed(text, self.dim, self.seed, self._memo), self.dim))
        return out

    @classmethod
    def from_config(cls, config: EmbeddingProviderConfig) -> "HashEmbeddingProvider":
        return cls(dim=config.dim, seed=config.seed)
