"""Service configuration: TOML file with environment-variable overrides.

Sections: [service], [embedding], [generation], [chunking], [guardrails].
An env var named LEXRAG_<SECTION>_<KEY> (e.g. LEXRAG_SERVICE_LISTEN_PORT)
overrides the corresponding file value.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from ..corpus.chunking import ChunkPolicy
from ..embedding.providers import EmbeddingProviderConfig
from ..rag.generate import GenerationClientConfig
from ..rag.guardrails import GuardrailPolicy


class ConfigError(Exception):
    pass


@dataclass
class ServiceConfig:
    corpus_path: str  # the only field without a default
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    index_dir: str = "lexrag-index"
    index_kind: str = "flat"
    cache_capacity: int = 1024
    log_level: str = "INFO"
    embedding: EmbeddingProviderConfig = field(default_factory=EmbeddingProviderConfig)
    generation: Optional[GenerationClientConfig] = None
    chunk_policy: ChunkPolicy = field(default_factory=ChunkPolicy)
    guardrails: GuardrailPolicy = field(default_factory=GuardrailPolicy)


def _env_override(section: str, key: str, current):
    raw = os.environ.get(f"LEXRAG_{section.upper()}_{key.upper()}")
    if raw is None:
        return current
    if isinstance(current, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(current, int):
        return int(raw)
    if isinstance(current, float):
        return float(raw)
    return raw


def _apply_env(section: str, values: dict) -> dict:
    return {key: _env_override(section, key, value) for key, value in values.items()}


def load_config(path: str | Path) -> ServiceConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file does not exist: {p}")
    try:
        with p.open("rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {p}: {exc}") from exc

    service = _apply_env("service", {
        "corpus_path": data.get("service", {}).get("corpus_path", ""),
        "listen_host": data.get("service", {}).get("listen_host", "127.0.0.1"),
        "listen_port": data.get("service", {}).get("listen_port", 8080),
        "index_dir": data.get("service", {}).get("index_dir", "lexrag-index"),
        "index_kind": data.get("service", {}).get("index_kind", "flat"),
        "cache_capacity": data.get("service", {}).get("cache_capacity", 1024),
        "log_level": data.get("service", {}).get("log_level", "INFO"),
    })
    if not service["corpus_path"]:
        raise ConfigError("corpus_path is required (section [service])")

    embedding_defaults = EmbeddingProviderConfig()
    emb = data.get("embedding", {})
    embedding = EmbeddingProviderConfig(**_apply_env("embedding", {
        "kind": emb.get("kind", embedding_defaults.kind),
        "dim": emb.get("dim", embedding_defaults.dim),
        "seed": emb.get("seed", embedding_defaults.seed),
        "endpoint_url": emb.get("endpoint_url", ""),
        "api_key_env_var": emb.get("api_key_env_var", ""),
        "model_name": emb.get("model_name", ""),
        "batch_size": emb.get("batch_size", embedding_defaults.batch_size),
        "timeout_ms": emb.get("timeout_ms", embedding_defaults.timeout_ms),
        "max_retries": emb.get("max_retries", embedding_defaults.max_retries),
    }))

    generation = None
    gen = data.get("generation", {})
    gen_values = _apply_env("generation", {
        "endpoint_url": gen.get("endpoint_url", ""),
        "api_key_env_var": gen.get("api_key_env_var", ""),
        "model_name": gen.get("model_name", ""),
        "timeout_ms": gen.get("timeout_ms", 30_000),
        "max_retries": gen.get("max_retries", 2),
    })
    if gen_values["endpoint_url"]:
        generation = GenerationClientConfig(**gen_values)

    chunking = _apply_env("chunking", {
        "max_chunk_chars": data.get("chunking", {}).get("max_chunk_chars", 600),
        "overlap_chars": data.get("chunking", {}).get("overlap_chars", 75),
    })
    guard = _apply_env("guardrails", {
        "min_top_score": float(data.get("guardrails", {}).get("min_top_score", 0.25)),
        "ambiguity_gap": float(data.get("guardrails", {}).get("ambiguity_gap", 0.05)),
    })

    return ServiceConfig(
        corpus_path=service["corpus_path"],
        listen_host=service["listen_host"],
        listen_port=service["listen_port"],
        index_dir=service["index_dir"],
        index_kind=service["index_kind"],
        cache_capacity=service["cache_capacity"],
        log_level=service["log_level"],
        embedding=embedding,
        generation=generation,
        chunk_policy=ChunkPolicy(
            max_chunk_chars=chunking["max_chunk_chars"],
            overlap_chars=chunking["overlap_chars"],
        ),
        guardrails=GuardrailPolicy(
            min_top_score=guard["min_top_score"],
            ambiguity_gap=guard["ambiguity_gap"],
        ),
    )
