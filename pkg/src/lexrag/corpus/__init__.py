from .chunking import DEFAULT_SEPARATORS, Chunk, ChunkPolicy, split_chunks
from .documents import (
    CorpusError,
    Document,
    correct_spelling,
    deduplicate,
    load_documents,
    normalize_document,
    normalize_text,
)
from .domains import DEFAULT_LEXICON, DomainLabel, assign_domain
from .entities import EntityKind, LegalEntity, extract_entities

__all__ = [
    "Chunk",
    "ChunkPolicy",
    "CorpusError",
    "DEFAULT_LEXICON",
    "DEFAULT_SEPARATORS",
    "Document",
    "DomainLabel",
    "EntityKind",
    "LegalEntity",
    "assign_domain",
    "correct_spelling",
    "deduplicate",
    "extract_entities",
    "load_documents",
    "normalize_document",
    "normalize_text",
    "split_chunks",
]
