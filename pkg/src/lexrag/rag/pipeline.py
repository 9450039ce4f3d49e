"""End-to-end query answering: cache, embed, retrieve, guard, generate."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from typing import Optional

from ..corpus.chunking import Chunk
from ..corpus.domains import DomainLabel
from ..embedding.providers import EmbeddingProvider
from ..vindex.partition import PartitionedIndex
from .cache import QueryCache, make_cache_key
from .generate import GenerationError, extractive_answer
from .guardrails import Decision, GuardrailPolicy, guard_query
from .prompt import DEFAULT_CHAR_BUDGET, assemble_prompt

logger = logging.getLogger(__name__)


@dataclass
class Query:
    text: str
    k: int = 5
    domains: Optional[frozenset[DomainLabel]] = None
    session_id: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.text or not self.text.strip():
            raise ValueError("query text must be non-empty")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.domains is not None:
            self.domains = frozenset(DomainLabel(d) for d in self.domains)


@dataclass(frozen=True)
class RetrievedHit:
    """A search hit joined with its chunk text and metadata."""

    chunk_id: str
    doc_id: str
    score: float
    vec_id: int
    text: str
    domain: DomainLabel


@dataclass(frozen=True)
class RetrievalResult:
    hits: tuple[RetrievedHit, ...]
    retrieval_latency_ms: float
    cache_hit: bool
    embed_latency_ms: float = 0.0


@dataclass(frozen=True)
class Source:
    chunk_id: str
    doc_id: str
    score: float


@dataclass
class Answer:
    text: str
    sources: list[Source]
    decision: Decision
    generation_latency_ms: float
    generator: Optional[str]  # "remote" | "extractive_fallback" | None
    retrieval: RetrievalResult

    def __post_init__(self) -> None:
        if self.decision == Decision.ANSWERED and not self.sources:
            raise ValueError("an answered response must cite at least one source")
        retrieved = {hit.chunk_id for hit in self.retrieval.hits}
        for source in self.sources:
            if source.chunk_id not in retrieved:
                raise ValueError(
                    f"source {source.chunk_id!r} is not among the retrieved hits"
                )


class RagPipeline:
    """Answering engine over a built partitioned index.

    Safe for concurrent use: the cache is internally synchronized and index
    searches follow the many-reader contract.
    """

    def __init__(
        self,
        provider: EmbeddingProvider,
        index: PartitionedIndex,
        chunks: dict[str, Chunk],
        guardrails: GuardrailPolicy | None = None,
        cache: QueryCache | None = None,
        chat_client=None,
        prompt_char_budget: int = DEFAULT_CHAR_BUDGET,
    ):
        self.provider = provider
        self.index = index
        self.chunks = chunks
        self.guardrails = guardrails or GuardrailPolicy()
        self.cache = cache
        self.chat_client = chat_client
        self.prompt_char_budget = prompt_char_budget

    def _join(self, hits) -> tuple[RetrievedHit, ...]:
        joined = []
        for hit in hits:
            chunk = self.chunks[hit.chunk_id]
            joined.append(
                RetrievedHit(
                    chunk_id=hit.chunk_id,
                    doc_id=chunk.doc_id,
                    score=hit.score,
                    vec_id=hit.vec_id,
                    text=chunk.text,
                    domain=chunk.domain,
                )
            )
        return tuple(joined)

    def retrieve(self, query: Query, use_cache: bool = True) -> RetrievalResult:
        """Cache check, then embed the query and fan out to the index."""
        key = make_cache_key(query.text, query.k, query.domains)
        if use_cache and self.cache is not None:
            cached = self.cache.lookup(key)
            if cached is not None:
                return replace(cached, cache_hit=True)
        t0 = time.perf_counter()
        qvec = self.provider.embed(query.text)
        t1 = time.perf_counter()
        hits = self.index.search(qvec, query.k, domains=query.domains)
        joined = self._join(hits)
        t2 = time.perf_counter()
        result = RetrievalResult(
            hits=joined,
            retrieval_latency_ms=(t2 - t1) * 1000.0,
            cache_hit=False,
            embed_latency_ms=(t1 - t0) * 1000.0,
        )
        if use_cache and self.cache is not None:
            self.cache.store(key, result)
        return result

    def answer_query(self, query: Query, use_cache: bool = True) -> Answer:
        retrieval = self.retrieve(query, use_cache=use_cache)
        decision = guard_query(retrieval.hits, self.guardrails)
        if decision != Decision.ANSWERED:
            template = (
                self.guardrails.clarify_message_template
                if decision == Decision.CLARIFY
                else self.guardrails.refuse_message_template
            )
            return Answer(
                text=template.format(query=query.text),
                sources=[],
                decision=decision,
                generation_latency_ms=0.0,
                generator=None,
                retrieval=retrieval,
            )

        t0 = time.perf_counter()
        prompt = assemble_prompt(query.text, retrieval.hits, self.prompt_char_budget)
        if self.chat_client is not None:
            try:
                text = self.chat_client.generate(prompt)
                generator = "remote"
            except GenerationError as exc:
                logger.warning("remote generation failed (%s); using extractive fallback", exc)
                text = extractive_answer(retrieval.hits)
                generator = "extractive_fallback"
        else:
            text = extractive_answer(retrieval.hits)
            generator = "extractive_fallback"
        generation_ms = (time.perf_counter() - t0) * 1000.0

        sources = [Source(h.chunk_id, h.doc_id, h.score) for h in retrieval.hits]
        return Answer(
            text=text,
            sources=sources,
            decision=Decision.ANSWERED,
            generation_latency_ms=generation_ms,
            generator=generator,
            retrieval=retrieval,
        )
