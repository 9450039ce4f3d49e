"""Command-line interface: ingest, build-index, query, serve, eval, bench,
compare-indexes."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ..corpus import ChunkPolicy, CorpusError, DomainLabel, load_documents
from ..embedding import EmbeddingProviderConfig, build_provider
from ..evalkit import (
    Complexity,
    DatasetError,
    compare_indexes,
    default_comparison_configs,
    evaluate_pipeline,
    latency_benchmark,
    load_eval_samples,
)
from ..rag import Query
from ..vindex import HnswParams, IvfParams, PersistenceError, PqParams
from .config import ConfigError, ServiceConfig, load_config
from .engine import Engine


def _add_index_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--index", required=True, help="index directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexrag",
        description="Retrieval-augmented legal question answering engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="chunk, embed and index a corpus")
    p.add_argument("--corpus", required=True, help="JSONL record file or .txt directory")
    p.add_argument("--out", required=True, help="output index directory")
    p.add_argument("--dim", type=int, default=1024)
    p.add_argument("--seed", type=int, default=None, help="embedding hash seed")
    p.add_argument("--max-chunk-chars", type=int, default=600)
    p.add_argument("--overlap-chars", type=int, default=75)
    p.add_argument("--kind", default="flat", choices=["flat", "ivf", "ivf_pq", "hnsw"])

    p = sub.add_parser("build-index", help="rebuild the index with a chosen kind")
    _add_index_arg(p)
    p.add_argument("--kind", required=True, choices=["flat", "ivf", "ivf_pq", "hnsw"])
    p.add_argument("--nlist", type=int, default=16)
    p.add_argument("--nprobe", type=int, default=4)
    p.add_argument("--kmeans-iters", type=int, default=25)
    p.add_argument("--pq-m", type=int, default=8)
    p.add_argument("--pq-bits", type=int, default=8)
    p.add_argument("--hnsw-m", type=int, default=16)
    p.add_argument("--ef-construction", type=int, default=200)
    p.add_argument("--ef-search", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--codes-only", action="store_true",
                   help="IVF+PQ: drop raw vectors (memory-lean, approximate scores)")

    p = sub.add_parser("query", help="answer a single question")
    _add_index_arg(p)
    p.add_argument("--text", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--domains", default=None,
                   help="comma-separated domain labels to search")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None, help="TOML config file")
    p.add_argument("--index", default=None, help="pre-built index directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)

    p = sub.add_parser("eval", help="run the metric suite over an eval dataset")
    _add_index_arg(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out", default=None, help="report base path (.json/.csv added)")

    p = sub.add_parser("bench", help="latency benchmark by query complexity")
    _add_index_arg(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--repetitions", type=int, default=10)
    p.add_argument("--warmup", type=int, default=3)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out", default=None, help="CSV output path")

    p = sub.add_parser("compare-indexes", help="recall/latency/memory comparison")
    _add_index_arg(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--queries", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="JSON output path")

    return parser


def _cmd_ingest(args) -> int:
    seed = args.seed
    config = EmbeddingProviderConfig(
        kind="deterministic_hash", dim=args.dim,
        **({"seed": seed} if seed is not None else {}),
    )
    engine = Engine(
        build_provider(config),
        chunk_policy=ChunkPolicy(
            max_chunk_chars=args.max_chunk_chars, overlap_chars=args.overlap_chars
        ),
        provider_config=config,
    )
    docs = load_documents(args.corpus)
    created = engine.ingest_documents(docs)
    summary = engine.build_index(args.kind)
    engine.save(args.out)
    print(json.dumps({"documents": len(docs), "chunks_created": created, **summary}))
    return 0


def _cmd_build_index(args) -> int:
    engine = Engine.load(args.index)
    summary = engine.build_index(
        args.kind,
        ivf_params=IvfParams(args.nlist, args.nprobe, args.kmeans_iters, args.seed),
        pq_params=PqParams(args.pq_m, args.pq_bits, args.kmeans_iters, args.seed),
        hnsw_params=HnswParams(
            args.hnsw_m, args.ef_construction, args.ef_search, seed=args.seed
        ),
        keep_raw=not args.codes_only,
    )
    engine.save(args.index)
    print(json.dumps(summary))
    return 0


def _cmd_query(args) -> int:
    engine = Engine.load(args.index)
    domains = None
    if args.domains:
        domains = frozenset(DomainLabel(d.strip()) for d in args.domains.split(","))
    answer = engine.answer(Query(text=args.text, k=args.k, domains=domains))
    payload = {
        "answer": answer.text,
        "decision": str(answer.decision),
        "generator": answer.generator,
        "sources": [
            {"chunk_id": s.chunk_id, "doc_id": s.doc_id, "score": s.score}
            for s in answer.sources
        ],
        "latency_ms": {
            "embed": answer.retrieval.embed_latency_ms,
            "retrieve": answer.retrieval.retrieval_latency_ms,
            "generate": answer.generation_latency_ms,
        },
        "cache_hit": answer.retrieval.cache_hit,
    }
    print(json.dumps(payload, indent=2))
    return 0


def _build_engine_from_config(config: ServiceConfig) -> Engine:
    from ..rag.generate import RemoteChatClient

    chat_client = RemoteChatClient(config.generation) if config.generation else None
    index_dir = Path(config.index_dir)
    if (index_dir / "manifest.json").exists():
        return Engine.load(
            index_dir,
            guardrails=config.guardrails,
            cache_capacity=config.cache_capacity,
            chat_client=chat_client,
        )
    engine = Engine(
        build_provider(config.embedding),
        chunk_policy=config.chunk_policy,
        guardrails=config.guardrails,
        cache_capacity=config.cache_capacity,
        chat_client=chat_client,
        provider_config=config.embedding,
    )
    engine.ingest_documents(load_documents(config.corpus_path))
    engine.build_index(config.index_kind)
    engine.save(index_dir)
    return engine


def _cmd_serve(args) -> int:
    import uvicorn

    from .app import create_app

    if args.config:
        config = load_config(args.config)
        engine = _build_engine_from_config(config)
        host, port, log_level = config.listen_host, config.listen_port, config.log_level
    elif args.index:
        engine = Engine.load(args.index)
        host, port, log_level = args.host, args.port, "info"
    else:
        print("error: serve needs --config or --index", file=sys.stderr)
        return 1
    app = create_app(engine)
    uvicorn.run(app, host=host, port=port, log_level=log_level.lower())
    return 0


def _cmd_eval(args) -> int:
    engine = Engine.load(args.index)
    samples = load_eval_samples(args.dataset)
    report = evaluate_pipeline(engine.pipeline, samples, k=args.k)
    if args.out:
        base = Path(args.out)
        report.write_json(base.with_suffix(".json"))
        report.write_csv(base.with_suffix(".csv"))
        print(json.dumps({"written": [str(base.with_suffix(".json")),
                                      str(base.with_suffix(".csv"))]}))
    else:
        print(report.to_json())
    return 0


def _cmd_bench(args) -> int:
    engine = Engine.load(args.index)
    samples = load_eval_samples(args.dataset)
    grouped: dict[Complexity, list[Query]] = {}
    for sample in samples:
        grouped.setdefault(sample.complexity, []).append(
            Query(text=sample.query_text, k=args.k)
        )
    report = latency_benchmark(
        engine.pipeline, grouped, repetitions=args.repetitions, warmup=args.warmup
    )
    if args.out:
        report.write_csv(args.out)
        print(json.dumps({"written": args.out, "rows": len(report.rows)}))
    else:
        print("QueryComplexityLevel,ProcessingTime")
        for level, ms in report.rows:
            print(f"{level},{ms:.3f}")
    return 0


def _cmd_compare_indexes(args) -> int:
    engine = Engine.load(args.index)
    engine._ensure_vectors()
    records = [(cid, engine.vectors[cid]) for cid in sorted(engine.chunks)]
    rng = np.random.Generator(np.random.PCG64(args.seed))
    picks = rng.choice(len(records), size=min(args.queries, len(records)), replace=False)
    queries = [records[i][1] for i in picks]
    rows = compare_indexes(default_comparison_configs(args.seed), records, queries, k=args.k)
    if args.out:
        Path(args.out).write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
        print(json.dumps({"written": args.out, "rows": len(rows)}))
    else:
        print(json.dumps(rows, indent=2))
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "build-index": _cmd_build_index,
    "query": _cmd_query,
    "serve": _cmd_serve,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "compare-indexes": _cmd_compare_indexes,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CorpusError, DatasetError, ConfigError, PersistenceError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
