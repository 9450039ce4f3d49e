"""HTTP client for a remote embedding service.

Wire format: POST {"model": ..., "input": [texts]} -> {"data": [{"index": i,
"embedding": [...]}, ...]}. Responses are re-ordered by index and normalized;
429/5xx/timeouts are retried with exponential backoff.
"""

from __future__ import annotations

import logging
import os
import threading
import time

import httpx
import numpy as np

from .providers import (
    EmbeddingError,
    EmbeddingProvider,
    EmbeddingProviderConfig,
    NORM_TOLERANCE,
)

logger = logging.getLogger(__name__)

RETRYABLE_STATUSES = {429, 500, 502, 503, 504}


class RemoteEmbeddingProvider(EmbeddingProvider):
    def __init__(
        self,
        config: EmbeddingProviderConfig,
        transport: httpx.BaseTransport | None = None,
        max_in_flight: int = 4,
        backoff_s: float = 0.25,
    ):
        if not config.endpoint_url:
            raise ValueError("remote provider requires endpoint_url")
        self.config = config
        self.dim = config.dim
        self.fingerprint = f"remote_http:{config.model_name}:d{config.dim}"
        self.backoff_s = backoff_s
        self._inflight = threading.Semaphore(max_in_flight)
        self._client = httpx.Client(
            timeout=config.timeout_ms / 1000.0, transport=transport
        )

    def close(self) -> None:
        self._client.close()

    def _headers(self) -> dict[str, str]:
        headers = {"content-type": "application/json"}
        if self.config.api_key_env_var:
            key = os.environ.get(self.config.api_key_env_var, "")
            if key:
                headers["authorization"] = f"Bearer {key}"
        return headers

    def _post_with_retries(self, payload: dict) -> httpx.Response:
        attempts = self.config.max_retries + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            if attempt > 0:
                delay = self.backoff_s * (2 ** (attempt - 1))
                logger.warning(
                    "retrying embedding request (attempt %d/%d) after %.2fs",
                    attempt + 1, attempts, delay,
                )
                time.sleep(delay)
            started = time.perf_counter()
            try:
                with self._inflight:
                    response = self._client.post(
                        self.config.endpoint_url, json=payload, headers=self._headers()
                    )
            except httpx.TimeoutException as exc:
                last_error = exc
                continue
            if response.status_code in RETRYABLE_STATUSES:
                last_error = EmbeddingError(
                    f"embedding service returned {response.status_code}",
                    status=response.status_code,
                    latency_ms=(time.perf_counter() - started) * 1000.0,
                )
                continue
            if response.status_code != 200:
                raise EmbeddingError(
                    f"embedding service returned {response.status_code}",
                    status=response.status_code,
                    latency_ms=(time.perf_counter() - started) * 1000.0,
                )
            return response
        raise EmbeddingError(
            f"embedding request failed after {attempts} attempts: {last_error}",
            status=getattr(last_error, "status", None),
        )

    def _embed_group(self, texts: list[str]) -> list[np.ndarray]:
        payload = {"model": self.config.model_name, "input": texts}
        response = self._post_with_retries(payload)
        body = response.json()
        rows = body.get("data")
        if rows is None:
            raise EmbeddingError("malformed response: missing 'data'")
        by_index: dict[int, np.ndarray] = {}
        for row in rows:
            by_index[int(row["index"])] = np.asarray(row["embedding"], dtype=np.float32)
        vectors: list[np.ndarray] = []
        for i in range(len(texts)):
            if i not in by_index:
                raise EmbeddingError(f"response is missing embedding index {i}")
            vec = by_index[i]
            if vec.shape != (self.dim,):
                raise EmbeddingError(
                    f"dimension mismatch: expected {self.dim}, got {vec.shape[0]}"
                )
            norm = float(np.linalg.norm(vec))
            if norm == 0.0 or not np.isfinite(vec).all():
                raise EmbeddingError(f"service returned a degenerate vector at index {i}")
            if abs(norm - 1.0) > NORM_TOLERANCE:
                vec = vec / norm
            vectors.append(vec)
        return vectors

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        for i, text in enumerate(texts):
            if not text.strip():
                raise EmbeddingError(f"cannot embed empty input (index {i})")
        out: list[np.ndarray] = []
        step = self.config.batch_size
        for offset in range(0, len(texts), step):
            out.extend(self._embed_group(texts[offset : offset + step]))
        return out


def remote_embed(
    config: EmbeddingProviderConfig,
    texts: list[str],
    transport: httpx.BaseTransport | None = None,
) -> list[np.ndarray]:
    """One-shot remote embedding with the full retry/normalization contract."""
    provider = RemoteEmbeddingProvider(config, transport=transport)
    try:
        return provider.embed_batch(texts)
    finally:
        provider.close()


def build_provider(
    config: EmbeddingProviderConfig,
    transport: httpx.BaseTransport | None = None,
) -> EmbeddingProvider:
    from .providers import HashEmbeddingProvider

    if config.kind == "deterministic_hash":
        return HashEmbeddingProvider.from_config(config)
    return RemoteEmbeddingProvider(config, transport=transport)
