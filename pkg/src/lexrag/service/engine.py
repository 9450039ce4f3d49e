"""Engine assembly: corpus state + embeddings + index + answering pipeline.

This is the unit the CLI and HTTP service share. Index changes follow the
rebuild-on-change model: ingesting documents re-chunks and re-embeds only the
new material, but switching index kinds rebuilds from the kept vectors.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict
from pathlib import Path
from typing import Optional

import numpy as np

from ..corpus import (
    Chunk,
    ChunkPolicy,
    CorpusError,
    Document,
    DomainLabel,
    assign_domain,
    deduplicate,
    normalize_document,
    split_chunks,
)
from ..embedding import EmbeddingProvider, EmbeddingProviderConfig, build_provider
from ..rag import GuardrailPolicy, Query, QueryCache, RagPipeline
from ..vindex import (
    HnswParams,
    IvfParams,
    PartitionedIndex,
    PqParams,
    build_partitioned_index,
    load_index,
    save_index,
)

logger = logging.getLogger(__name__)

CHUNKS_FILENAME = "chunks.jsonl"


class Engine:
    def __init__(
        self,
        provider: EmbeddingProvider,
        chunk_policy: ChunkPolicy | None = None,
        guardrails: GuardrailPolicy | None = None,
        cache_capacity: int = 1024,
        chat_client=None,
        provider_config: EmbeddingProviderConfig | None = None,
    ):
        self.provider = provider
        self.chunk_policy = chunk_policy or ChunkPolicy()
        self.guardrails = guardrails or GuardrailPolicy()
        self.cache_capacity = cache_capacity
        self.chat_client = chat_client
        self.provider_config = provider_config
        self.chunks: dict[str, Chunk] = {}
        self.doc_ids: set[str] = set()
        self.vectors: dict[str, np.ndarray] = {}
        self.index: Optional[PartitionedIndex] = None
        self._pipeline: Optional[RagPipeline] = None

    # ------------------------------------------------------------------
    # ingestion
    # ------------------------------------------------------------------

    def ingest_documents(self, docs: list[Document]) -> int:
        """Normalize, deduplicate, domain-label, chunk and embed documents.

        Returns the number of chunks created. Duplicate document ids (within
        the batch or against already-ingested ones) are an error.
        """
        normalized = []
        for doc in docs:
            if doc.id in self.doc_ids:
                raise CorpusError(f"duplicate document id: {doc.id!r}")
            norm = normalize_document(doc)
            if not norm.body:
                raise CorpusError(f"document {doc.id!r} is empty after normalization")
            normalized.append(norm)
        batch_ids = [d.id for d in normalized]
        if len(set(batch_ids)) != len(batch_ids):
            dupes = sorted({i for i in batch_ids if batch_ids.count(i) > 1})
            raise CorpusError(f"duplicate document id: {dupes[0]!r}")

        created = 0
        for doc in deduplicate(normalized):
            if doc.domain is None:
                doc.domain = assign_domain(doc.body)
            chunks = split_chunks(doc, self.chunk_policy)
            texts = [c.text for c in chunks]
            vectors = self.provider.embed_batch(texts)
            for chunk, vec in zip(chunks, vectors):
                self.chunks[chunk.chunk_id] = chunk
                self.vectors[chunk.chunk_id] = vec
            self.doc_ids.add(doc.id)
            created += len(chunks)
        return created

    # ------------------------------------------------------------------
    # index construction
    # ------------------------------------------------------------------

    def _ensure_vectors(self) -> None:
        """Re-embed chunk texts when vectors are absent (after Engine.load)."""
        missing = [cid for cid in self.chunks if cid not in self.vectors]
        if not missing:
            return
        vectors = self.provider.embed_batch([self.chunks[cid].text for cid in missing])
        self.vectors.update(zip(missing, vectors))

    def build_index(
        self,
        kind: str = "flat",
        ivf_params: IvfParams | None = None,
        pq_params: PqParams | None = None,
        hnsw_params: HnswParams | None = None,
        keep_raw: bool = True,
    ) -> dict:
        if not self.chunks:
            raise ValueError("no chunks ingested; cannot build an index")
        self._ensure_vectors()
        grouped: dict[DomainLabel, list[tuple[str, np.ndarray]]] = {}
        for chunk_id, chunk in self.chunks.items():
            grouped.setdefault(chunk.domain, []).append(
                (chunk_id, self.vectors[chunk_id])
            )
        started = time.perf_counter()
        self.index = build_partitioned_index(
            grouped,
            kind,
            self.provider.dim,
            self.provider.fingerprint,
            ivf_params=ivf_params,
            pq_params=pq_params,
            hnsw_params=hnsw_params,
            keep_raw=keep_raw,
            metadata=self._metadata(),
        )
        self._pipeline = None
        return {
            "kind": kind,
            "chunks": len(self.chunks),
            "partitions": {
                label.value: len(index)
                for label, index in sorted(
                    self.index.partitions.items(), key=lambda kv: kv[0].value
                )
            },
            "build_ms": (time.perf_counter() - started) * 1000.0,
        }

    def _metadata(self) -> dict:
        meta: dict = {"chunk_policy": {
            "max_chunk_chars": self.chunk_policy.max_chunk_chars,
            "overlap_chars": self.chunk_policy.overlap_chars,
            "separator_hierarchy": list(self.chunk_policy.separator_hierarchy),
        }}
        if self.provider_config is not None:
            config = asdict(self.provider_config)
            config.pop("api_key_env_var", None)
            meta["provider_config"] = config
        return meta

    # ------------------------------------------------------------------
    # answering
    # ------------------------------------------------------------------

    @property
    def pipeline(self) -> RagPipeline:
        if self.index is None:
            raise ValueError("index not built; run build_index first")
        if self._pipeline is None:
            self._pipeline = RagPipeline(
                provider=self.provider,
                index=self.index,
                chunks=self.chunks,
                guardrails=self.guardrails,
                cache=QueryCache(self.cache_capacity) if self.cache_capacity else None,
                chat_client=self.chat_client,
            )
        return self._pipeline

    def answer(self, query: Query):
        return self.pipeline.answer_query(query)

    # ------------------------------------------------------------------
    # persistence
    # ------------------------------------------------------------------

    def save(self, path: str | Path) -> Path:
        if self.index is None:
            raise ValueError("index not built; nothing to save")
        root = save_index(self.index, path)
        with (root / CHUNKS_FILENAME).open("w", encoding="utf-8") as fh:
            for chunk_id in sorted(self.chunks):
                chunk = self.chunks[chunk_id]
                fh.write(json.dumps({
                    "chunk_id": chunk.chunk_id,
                    "doc_id": chunk.doc_id,
                    "text": chunk.text,
                    "char_start": chunk.char_start,
                    "char_end": chunk.char_end,
                    "domain": chunk.domain.value,
                    "seq": chunk.seq,
                }, ensure_ascii=False) + "\n")
        return root

    @classmethod
    def load(
        cls,
        path: str | Path,
        provider: EmbeddingProvider | None = None,
        guardrails: GuardrailPolicy | None = None,
        cache_capacity: int = 1024,
        chat_client=None,
    ) -> "Engine":
        root = Path(path)
        index = load_index(root)
        if provider is None:
            config_dict = index.metadata.get("provider_config") or {}
            config = EmbeddingProviderConfig(**config_dict) if config_dict else EmbeddingProviderConfig(dim=index.dim)
            provider = build_provider(config)
        if provider.fingerprint != index.provider_fingerprint:
            logger.warning(
                "provider fingerprint %r does not match the index fingerprint %r",
                provider.fingerprint, index.provider_fingerprint,
            )
        policy_dict = index.metadata.get("chunk_policy") or {}
        policy = ChunkPolicy(
            max_chunk_chars=policy_dict.get("max_chunk_chars", 600),
            overlap_chars=policy_dict.get("overlap_chars", 75),
            separator_hierarchy=tuple(policy_dict.get("separator_hierarchy", ("\n\n", "\n", ". ", " ", ""))),
        ) if policy_dict else ChunkPolicy()
        engine = cls(
            provider,
            chunk_policy=policy,
            guardrails=guardrails,
            cache_capacity=cache_capacity,
            chat_client=chat_client,
        )
        engine.index = index
        chunks_path = root / CHUNKS_FILENAME
        if not chunks_path.exists():
            raise CorpusError(f"chunk sidecar missing: {chunks_path}")
        for line in chunks_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            chunk = Chunk(
                chunk_id=row["chunk_id"],
                doc_id=row["doc_id"],
                text=row["text"],
                char_start=row["char_start"],
                char_end=row["char_end"],
                domain=DomainLabel(row["domain"]),
                seq=row["seq"],
            )
            engine.chunks[chunk.chunk_id] = chunk
            engine.doc_ids.add(chunk.doc_id)
        return engine
