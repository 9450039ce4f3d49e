"""The evaluation harness: ranking metrics, BLEU/ROUGE, citation consistency,
repeat-query variation, and a full pipeline scorecard on the bundled dataset.

Run from the repository root:  python demos/04_evaluation_metrics.py
"""

from lexrag.bundled import eval_samples_path, mini_corpus_path
from lexrag.corpus import load_documents
from lexrag.embedding import HashEmbeddingProvider
from lexrag.evalkit import (
    EvalSample,
    bleu,
    consistency_variation,
    evaluate_pipeline,
    legal_consistency_score,
    load_eval_samples,
    mrr,
    ndcg_at_k,
    precision_at_k,
    rouge_l,
    rouge_n,
)
from lexrag.rag import Query
from lexrag.service.engine import Engine

# --- the metric primitives ---------------------------------------------------
print("precision@3 [A,B,C] vs {A,C}:", precision_at_k(["A", "B", "C"], {"A", "C"}, 3))
print("mrr [1, None]:", mrr([1, None]))
print("ndcg [1,0,1] @3:", round(ndcg_at_k([1, 0, 1], 3), 4))
print("bleu 'the cat sat' vs 'the cat sat down':",
      round(bleu("the cat sat", ["the cat sat down"]), 6))
print("rouge1 'the cat' vs 'the cat sat':", rouge_n("the cat", "the cat sat", 1))
print("rougeL 'a b c d' vs 'a x c y':", rouge_l("a b c d", "a x c y"))

sample = EvalSample(query_text="q", relevant_chunk_ids=frozenset({"c"}),
                    required_citations=frozenset({"IPC Section 420"}))
print("LCS, answer citing 420+415 with 420 required:",
      round(legal_consistency_score(
          "See IPC Section 420 read with IPC Section 415.", sample), 4))
print()

# --- pipeline scorecard ------------------------------------------------------
engine = Engine(HashEmbeddingProvider(256))
engine.ingest_documents(load_documents(mini_corpus_path()))
engine.build_index("flat")

samples = load_eval_samples(eval_samples_path())
report = evaluate_pipeline(engine.pipeline, samples, k=5)
print(f"evaluated {len(samples)} queries; aggregates:")
for name, value in sorted(report.aggregates.items()):
    print(f"  {name:16s} {value:.4f}")

rate = consistency_variation(
    engine.pipeline, Query(text="punishment for cheating", k=5), n_runs=20
)
print(f"\nretrieval variation over 20 repeats: {rate} (deterministic provider)")
