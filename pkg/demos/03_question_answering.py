"""End-to-end question answering over the bundled legal mini corpus:
ingest, build a partitioned index, and answer queries with guardrails,
caching and the extractive generator.

Run from the repository root:  python demos/03_question_answering.py
"""

from lexrag.bundled import mini_corpus_path
from lexrag.corpus import DomainLabel, load_documents
from lexrag.embedding import EmbeddingProviderConfig, HashEmbeddingProvider
from lexrag.rag import Query
from lexrag.service.engine import Engine

config = EmbeddingProviderConfig(dim=1024)
engine = Engine(HashEmbeddingProvider(1024), provider_config=config)
created = engine.ingest_documents(load_documents(mini_corpus_path()))
summary = engine.build_index("flat")
print(f"ingested {created} chunks; partitions: {summary['partitions']}\n")

questions = [
    Query(text="What is the punishment for IPC Section 420?", k=5),
    Query(text="What are the legal remedies for breach of contract?", k=5),
    Query(text="How does the Supreme Court define reasonable restrictions "
               "under Article 19(1)(a)?", k=5),
    # domain-filtered retrieval
    Query(text="punishment for cheating", k=3,
          domains=frozenset({DomainLabel.CRIMINAL})),
    # low-evidence query: the guardrails ask for clarification
    Query(text="qwerty zxcvb plmokn", k=5),
]

for query in questions:
    answer = engine.answer(query)
    print(f"Q: {query.text}")
    print(f"   decision={answer.decision}  cache_hit={answer.retrieval.cache_hit}")
    for source in answer.sources[:3]:
        print(f"   [{source.chunk_id}] score={source.score:.3f}")
    print(f"   {answer.text[:140]}...\n" if len(answer.text) > 140
          else f"   {answer.text}\n")

# asking the same question again is served from the LRU cache
again = engine.answer(questions[0])
print(f"repeat query cache_hit={again.retrieval.cache_hit}, "
      f"cache stats={engine.pipeline.cache.stats}")
