"""Answer generation: a chat-completions HTTP client plus the offline
extractive fallback that keeps the pipeline total."""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass
from typing import Optional

import httpx

logger = logging.getLogger(__name__)

RETRYABLE_STATUSES = {429, 500, 502, 503, 504}


class GenerationError(Exception):
    def __init__(self, message: str, status: Optional[int] = None):
        super().__init__(message)
        self.status = status


@dataclass
class GenerationClientConfig:
    endpoint_url: str = ""
    api_key_env_var: str = ""
    model_name: str = ""
    timeout_ms: int = 30_000
    max_retries: int = 2


class RemoteChatClient:
    """POSTs a chat-completions request and returns the first message text."""

    generator_name = "remote"

    def __init__(
        self,
        config: GenerationClientConfig,
        transport: httpx.BaseTransport | None = None,
        backoff_s: float = 0.25,
    ):
        if not config.endpoint_url:
            raise ValueError("remote chat client requires endpoint_url")
        self.config = config
        self.backoff_s = backoff_s
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

    def generate(self, prompt: str) -> str:
        if not prompt:
            raise GenerationError("prompt must be non-empty")
        payload = {
            "model": self.config.model_name,
            "messages": [{"role": "user", "content": prompt}],
        }
        attempts = self.config.max_retries + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            if attempt > 0:
                delay = self.backoff_s * (2 ** (attempt - 1))
                logger.warning(
                    "retrying generation request (attempt %d/%d) after %.2fs",
                    attempt + 1, attempts, delay,
                )
                time.sleep(delay)
            try:
                response = self._client.post(
                    self.config.endpoint_url, json=payload, headers=self._headers()
                )
            except httpx.TimeoutException as exc:
                last_error = exc
                continue
            if response.status_code in RETRYABLE_STATUSES:
                last_error = GenerationError(
                    f"generation service returned {response.status_code}",
                    status=response.status_code,
                )
                continue
            if response.status_code != 200:
                raise GenerationError(
                    f"generation service returned {response.status_code}",
                    status=response.status_code,
                )
            body = response.json()
            try:
                text = body["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError):
                raise GenerationError("malformed generation response") from None
            if not text:
                raise GenerationError("generation service returned an empty completion")
            return text
        raise GenerationError(
            f"generation request failed after {attempts} attempts: {last_error}",
            status=getattr(last_error, "status", None),
        )


def extractive_answer(hits) -> str:
    """Deterministic no-model answer: the top hit's text plus a source list."""
    if not hits:
        raise ValueError("extractive fallback needs at least one hit")
    lines = [
        f"[{i}] {hit.chunk_id} ({hit.doc_id}, score={hit.score:.4f})"
        for i, hit in enumerate(hits, start=1)
    ]
    return (
        "Based on the retrieved provisions: "
        + hits[0].text
        + "\n\nSources:\n"
        + "\n".join(lines)
    )
