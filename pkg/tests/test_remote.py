import json
import logging

import httpx
import numpy as np
import pytest

from lexrag.embedding import (
    EmbeddingError,
    EmbeddingProviderConfig,
    RemoteEmbeddingProvider,
    remote_embed,
)


def _unit(dim: int, axis: int) -> list[float]:
    vec = [0.0] * dim
    vec[axis] = 1.0
    return vec


def _config(**overrides) -> EmbeddingProviderConfig:
    values = dict(
        kind="remote_http",
        dim=4,
        endpoint_url="http://embeddings.test/v1/embeddings",
        model_name="test-embedder",
        batch_size=32,
        timeout_ms=1000,
        max_retries=3,
    )
    values.update(overrides)
    return EmbeddingProviderConfig(**values)


def _echo_transport(dim: int):
    """Returns unit vectors keyed by input order, deliberately out of order."""

    def handler(request: httpx.Request) -> httpx.Response:
        payload = json.loads(request.content)
        rows = [
            {"index": i, "embedding": _unit(dim, i % dim)}
            for i in range(len(payload["input"]))
        ]
        return httpx.Response(200, json={"data": list(reversed(rows))})

    return httpx.MockTransport(handler)


class TestRemoteEmbed:
    def test_happy_path_returns_vectors_in_input_order(self):
        config = _config()
        vectors = remote_embed(config, ["a", "b", "c"], transport=_echo_transport(4))
        assert len(vectors) == 3
        for i, vec in enumerate(vectors):
            np.testing.assert_allclose(vec, np.array(_unit(4, i), dtype=np.float32))

    def test_dimension_mismatch_error(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(
                200, json={"data": [{"index": 0, "embedding": _unit(8, 0)}]}
            )

        with pytest.raises(EmbeddingError, match="dimension mismatch"):
            remote_embed(_config(dim=4), ["a"], transport=httpx.MockTransport(handler))

    def test_missing_index_error(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(
                200, json={"data": [{"index": 1, "embedding": _unit(4, 0)}]}
            )

        with pytest.raises(EmbeddingError, match="missing embedding index 0"):
            remote_embed(_config(), ["a", "b"], transport=httpx.MockTransport(handler))

    def test_retries_on_503_then_succeeds_with_two_retry_events(self, caplog):
        calls = {"n": 0}

        def handler(request: httpx.Request) -> httpx.Response:
            calls["n"] += 1
            if calls["n"] <= 2:
                return httpx.Response(503)
            return httpx.Response(
                200, json={"data": [{"index": 0, "embedding": _unit(4, 0)}]}
            )

        provider = RemoteEmbeddingProvider(
            _config(), transport=httpx.MockTransport(handler), backoff_s=0.0
        )
        with caplog.at_level(logging.WARNING, logger="lexrag.embedding.remote"):
            vectors = provider.embed_batch(["a"])
        assert len(vectors) == 1
        retry_events = [r for r in caplog.records if "retrying" in r.message]
        assert len(retry_events) == 2
        assert calls["n"] == 3

    def test_non_2xx_after_retries_raises_with_status(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(503)

        provider = RemoteEmbeddingProvider(
            _config(max_retries=1), transport=httpx.MockTransport(handler), backoff_s=0.0
        )
        with pytest.raises(EmbeddingError) as excinfo:
            provider.embed_batch(["a"])
        assert excinfo.value.status == 503

    def test_non_retryable_status_fails_fast(self):
        calls = {"n": 0}

        def handler(request: httpx.Request) -> httpx.Response:
            calls["n"] += 1
            return httpx.Response(401)

        provider = RemoteEmbeddingProvider(
            _config(), transport=httpx.MockTransport(handler), backoff_s=0.0
        )
        with pytest.raises(EmbeddingError):
            provider.embed_batch(["a"])
        assert calls["n"] == 1

    def test_batches_split_by_batch_size(self):
        sizes = []

        def handler(request: httpx.Request) -> httpx.Response:
            payload = json.loads(request.content)
            sizes.append(len(payload["input"]))
            rows = [
                {"index": i, "embedding": _unit(4, 0)}
                for i in range(len(payload["input"]))
            ]
            return httpx.Response(200, json={"data": rows})

        provider = RemoteEmbeddingProvider(
            _config(batch_size=2), transport=httpx.MockTransport(handler)
        )
        vectors = provider.embed_batch(["a", "b", "c", "d", "e"])
        assert len(vectors) == 5
        assert sizes == [2, 2, 1]

    def test_non_unit_vectors_are_normalized(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(
                200, json={"data": [{"index": 0, "embedding": [3.0, 0.0, 4.0, 0.0]}]}
            )

        vectors = remote_embed(_config(), ["a"], transport=httpx.MockTransport(handler))
        assert float(np.linalg.norm(vectors[0])) == pytest.approx(1.0, abs=1e-6)

    def test_api_key_header_from_environment(self, monkeypatch):
        seen = {}

        def handler(request: httpx.Request) -> httpx.Response:
            seen["auth"] = request.headers.get("authorization")
            return httpx.Response(
                200, json={"data": [{"index": 0, "embedding": _unit(4, 0)}]}
            )

        monkeypatch.setenv("TEST_EMBED_KEY", "sekrit")
        config = _config(api_key_env_var="TEST_EMBED_KEY")
        remote_embed(config, ["a"], transport=httpx.MockTransport(handler))
        assert seen["auth"] == "Bearer sekrit"

    def test_empty_text_rejected_before_any_request(self):
        def handler(request: httpx.Request) -> httpx.Response:  # pragma: no cover
            raise AssertionError("no request should be issued")

        provider = RemoteEmbeddingProvider(
            _config(), transport=httpx.MockTransport(handler)
        )
        with pytest.raises(EmbeddingError, match="index 1"):
            provider.embed_batch(["ok", " "])
