"""HTTP API over the engine: ingest, build, query, chat, health, metrics.

Every 4xx/5xx body carries {"error": {"code", "message"}}.
"""

from __future__ import annotations

import threading
import uuid
from collections import deque

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from ..corpus import CorpusError, Document, DomainLabel
from ..rag import Query
from ..vindex import INDEX_KINDS, HnswParams, IvfParams, PqParams
from .engine import Engine

SESSION_RING_TURNS = 20


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class QueryRequest(BaseModel):
    text: str = ""
    k: int = 5
    domains: list[str] | None = None


class ChatRequest(BaseModel):
    session_id: str | None = None
    message: str = ""
    k: int = 5
    domains: list[str] | None = None


class IngestRequest(BaseModel):
    documents: list[dict]


class BuildRequest(BaseModel):
    kind: str = "flat"
    params: dict = {}


class _Metrics:
    def __init__(self, window: int = 1000):
        self._lock = threading.Lock()
        self.query_count = 0
        self.embed_ms: deque[float] = deque(maxlen=window)
        self.retrieve_ms: deque[float] = deque(maxlen=window)
        self.generate_ms: deque[float] = deque(maxlen=window)

    def record(self, answer) -> None:
        with self._lock:
            self.query_count += 1
            self.embed_ms.append(answer.retrieval.embed_latency_ms)
            self.retrieve_ms.append(answer.retrieval.retrieval_latency_ms)
            self.generate_ms.append(answer.generation_latency_ms)

    @staticmethod
    def _pct(values: list[float], q: float) -> float:
        if not values:
            return 0.0
        ordered = sorted(values)
        pos = q * (len(ordered) - 1)
        lo = int(pos)
        hi = min(lo + 1, len(ordered) - 1)
        return ordered[lo] * (1 - (pos - lo)) + ordered[hi] * (pos - lo)

    def render(self, engine: Engine) -> str:
        with self._lock:
            cache = engine.pipeline.cache if engine.index is not None else None
            stats = cache.stats if cache is not None else {"hits": 0, "misses": 0}
            total = stats["hits"] + stats["misses"]
            lines = [
                f"query_count {self.query_count}",
                f"cache_hits {stats['hits']}",
                f"cache_misses {stats['misses']}",
                f"cache_hit_rate {stats['hits'] / total if total else 0.0:.4f}",
                f"index_chunks {len(engine.index) if engine.index is not None else 0}",
            ]
            for name, values in (
                ("embed_ms", list(self.embed_ms)),
                ("retrieve_ms", list(self.retrieve_ms)),
                ("generate_ms", list(self.generate_ms)),
            ):
                lines.append(f"{name}_p50 {self._pct(values, 0.5):.3f}")
                lines.append(f"{name}_p95 {self._pct(values, 0.95):.3f}")
            return "\n".join(lines) + "\n"


def _parse_domains(raw: list[str] | None) -> frozenset[DomainLabel] | None:
    if raw is None:
        return None
    try:
        return frozenset(DomainLabel(d) for d in raw)
    except ValueError:
        known = [d.value for d in DomainLabel]
        raise ApiError(400, "unknown_domain", f"domains must be among {known}") from None


def _document_from_payload(payload: dict, position: int) -> Document:
    if not isinstance(payload, dict):
        raise ApiError(400, "invalid_document", f"document {position} is not an object")
    try:
        domain = DomainLabel(payload["domain"]) if payload.get("domain") else None
    except ValueError:
        raise ApiError(400, "unknown_domain",
                       f"document {position} has unknown domain {payload['domain']!r}") from None
    doc_id = payload.get("id")
    body = payload.get("body")
    if not doc_id or not isinstance(doc_id, str):
        raise ApiError(400, "invalid_document", f"document {position} is missing 'id'")
    if not body or not isinstance(body, str):
        raise ApiError(400, "invalid_document", f"document {position} is missing 'body'")
    return Document(
        id=doc_id,
        title=payload.get("title", ""),
        body=body,
        source_uri=payload.get("source_uri", ""),
        domain=domain,
        citation_count=payload.get("citation_count", 0) or 0,
    )


def _answer_payload(engine: Engine, answer) -> dict:
    sources = []
    for source in answer.sources:
        chunk = engine.chunks.get(source.chunk_id)
        sources.append({
            "chunk_id": source.chunk_id,
            "doc_id": source.doc_id,
            "score": source.score,
            "text": chunk.text if chunk is not None else "",
            "domain": chunk.domain.value if chunk is not None else None,
        })
    return {
        "answer": answer.text,
        "decision": str(answer.decision),
        "generator": answer.generator,
        "sources": sources,
        "latency_ms": {
            "embed": answer.retrieval.embed_latency_ms,
            "retrieve": answer.retrieval.retrieval_latency_ms,
            "generate": answer.generation_latency_ms,
        },
        "cache_hit": answer.retrieval.cache_hit,
    }


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="lexrag", docs_url=None, redoc_url=None)
    metrics = _Metrics()
    sessions: dict[str, deque] = {}
    sessions_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(_: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "validation_error", "message": str(exc.errors())}},
        )

    @app.exception_handler(Exception)
    async def _internal_error(_: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"error": {"code": "internal", "message": str(exc)}},
        )

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "index_chunks": len(engine.index) if engine.index is not None else 0,
        }

    @app.get("/metrics")
    def metrics_endpoint():
        return PlainTextResponse(metrics.render(engine))

    def _run_query(text: str, k: int, domains: list[str] | None):
        if not text or not text.strip():
            raise ApiError(400, "empty_query", "query text must be non-empty")
        if k < 1:
            raise ApiError(400, "invalid_k", "k must be >= 1")
        if engine.index is None:
            raise ApiError(409, "index_not_built", "ingest documents and build an index first")
        try:
            query = Query(text=text, k=k, domains=_parse_domains(domains))
            answer = engine.answer(query)
        except ValueError as exc:
            raise ApiError(400, "bad_request", str(exc)) from exc
        metrics.record(answer)
        return answer

    @app.post("/query")
    def query_endpoint(request: QueryRequest):
        answer = _run_query(request.text, request.k, request.domains)
        return _answer_payload(engine, answer)

    @app.post("/chat")
    def chat_endpoint(request: ChatRequest):
        session_id = request.session_id or uuid.uuid4().hex
        answer = _run_query(request.message, request.k, request.domains)
        payload = _answer_payload(engine, answer)
        payload["session_id"] = session_id
        with sessions_lock:
            ring = sessions.setdefault(session_id, deque(maxlen=SESSION_RING_TURNS))
            ring.append({"role": "user", "text": request.message})
            ring.append({
                "role": "assistant",
                "text": answer.text,
                "decision": str(answer.decision),
            })
            payload["transcript"] = list(ring)
        return payload

    @app.post("/ingest")
    def ingest_endpoint(request: IngestRequest):
        docs = [
            _document_from_payload(payload, i)
            for i, payload in enumerate(request.documents)
        ]
        try:
            created = engine.ingest_documents(docs)
        except CorpusError as exc:
            raise ApiError(400, "corpus_error", str(exc)) from exc
        kind = engine.index.index_kind if engine.index is not None else "flat"
        engine.build_index(kind)
        return {"chunks_created": created}

    @app.post("/index/build")
    def build_endpoint(request: BuildRequest):
        if request.kind not in INDEX_KINDS:
            raise ApiError(400, "unknown_index_kind",
                           f"kind must be one of {list(INDEX_KINDS)}")
        params = request.params or {}
        try:
            summary = engine.build_index(
                request.kind,
                ivf_params=_ivf_params(params) if request.kind in ("ivf", "ivf_pq") else None,
                pq_params=_pq_params(params) if request.kind == "ivf_pq" else None,
                hnsw_params=_hnsw_params(params) if request.kind == "hnsw" else None,
                keep_raw=params.get("keep_raw", True),
            )
        except ValueError as exc:
            raise ApiError(400, "bad_params", str(exc)) from exc
        return summary

    return app


def _ivf_params(params: dict) -> IvfParams:
    return IvfParams(
        nlist=params.get("nlist", 16),
        nprobe=params.get("nprobe", 4),
        kmeans_iters=params.get("kmeans_iters", 25),
        seed=params.get("seed", 0),
    )


def _pq_params(params: dict) -> PqParams:
    return PqParams(
        m=params.get("m", 8),
        bits=params.get("bits", 8),
        kmeans_iters=params.get("pq_kmeans_iters", 25),
        seed=params.get("pq_seed", 0),
    )


def _hnsw_params(params: dict) -> HnswParams:
    return HnswParams(
        m=params.get("M", params.get("m", 16)),
        ef_construction=params.get("ef_construction", 200),
        ef_search=params.get("ef_search", 64),
        level_lambda=params.get("level_lambda"),
        seed=params.get("seed", 0),
    )
