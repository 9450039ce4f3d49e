"""lexrag: retrieval-augmented question answering over a legal corpus.

Subpackages:
    corpus     document loading, normalization, entity tagging, chunking
    embedding  unit-vector embedding providers (deterministic hash + remote)
    vindex     flat / IVF / IVF+PQ / HNSW cosine indexes with persistence
    rag        cache, retrieval, guardrails, prompt assembly, generation
    evalkit    ranking + overlap metrics, consistency, benchmarks
    service    engine assembly, HTTP API, CLI
"""

__version__ = "0.1.0"
