import numpy as np
import pytest

from lexrag.bundled import mini_corpus_path
from lexrag.corpus import load_documents
from lexrag.embedding import EmbeddingProviderConfig, HashEmbeddingProvider
from lexrag.service.engine import Engine


def random_unit_vectors(n: int, dim: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    vecs = rng.normal(size=(n, dim)).astype(np.float32)
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return vecs


def make_records(n: int, dim: int, seed: int) -> list[tuple[str, np.ndarray]]:
    vecs = random_unit_vectors(n, dim, seed)
    return [(f"c{i:05d}", vecs[i]) for i in range(n)]


@pytest.fixture(scope="session")
def mini_docs():
    return load_documents(mini_corpus_path())


@pytest.fixture(scope="session")
def desk_engine(mini_docs):
    """Mini corpus ingested at a small dimension with a flat index."""
    config = EmbeddingProviderConfig(dim=256)
    engine = Engine(HashEmbeddingProvider(256), provider_config=config)
    engine.ingest_documents(mini_docs)
    engine.build_index("flat")
    return engine
