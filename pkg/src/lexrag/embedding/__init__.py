from .providers import (
    DEFAULT_HASH_SEED,
    EmbeddingError,
    EmbeddingProvider,
    EmbeddingProviderConfig,
    HashEmbeddingProvider,
    hash_embed,
)
from .remote import RemoteEmbeddingProvider, build_provider, remote_embed

__all__ = [
    "DEFAULT_HASH_SEED",
    "EmbeddingError",
    "EmbeddingProvider",
    "EmbeddingProviderConfig",
    "HashEmbeddingProvider",
    "RemoteEmbeddingProvider",
    "build_provider",
    "hash_embed",
    "remote_embed",
]
