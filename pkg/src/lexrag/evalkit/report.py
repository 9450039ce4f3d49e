"""Full-suite evaluation of a pipeline over an eval dataset, with JSON and
CSV report emission."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..rag.guardrails import Decision
from ..rag.pipeline import Query, RagPipeline
from .consistency import legal_consistency_score
from .dataset import EvalSample
from .overlap import bleu, rouge_l, rouge_n
from .ranking import first_relevant_rank, mrr, ndcg_at_k, precision_at_k

METRIC_COLUMNS = [
    "precision_at_k",
    "reciprocal_rank",
    "ndcg_at_k",
    "bleu",
    "rouge1_f1",
    "rouge2_f1",
    "rougeL_f1",
    "lcs_score",
]


@dataclass
class MetricsReport:
    k: int
    per_query: list[dict]
    aggregates: dict[str, float]
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "aggregates": self.aggregates,
                "per_query": self.per_query,
                "metadata": self.metadata,
            },
            indent=2,
            sort_keys=True,
        )

    def write_json(self, path: str | Path) -> Path:
        p = Path(path)
        p.write_text(self.to_json() + "\n", encoding="utf-8")
        return p

    def write_csv(self, path: str | Path) -> Path:
        p = Path(path)
        with p.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["query", "decision", *METRIC_COLUMNS])
            for row in self.per_query:
                writer.writerow(
                    [row["query"], row["decision"]]
                    + [row.get(col, "") for col in METRIC_COLUMNS]
                )
        return p


def evaluate_pipeline(
    pipeline: RagPipeline,
    samples: list[EvalSample],
    k: int = 5,
) -> MetricsReport:
    """Answer every sample and compute the metric suite.

    Ranking metrics use binary gains from relevant_chunk_ids; BLEU/ROUGE run
    only for samples with a reference answer, and the citation-consistency
    score only for samples with required citations. Aggregates are arithmetic
    means of the per-query values.
    """
    per_query: list[dict] = []
    ranks: list[Optional[int]] = []
    for sample in samples:
        answer = pipeline.answer_query(Query(text=sample.query_text, k=k), use_cache=False)
        ranked_ids = [hit.chunk_id for hit in answer.retrieval.hits]
        relevant = set(sample.relevant_chunk_ids)
        gains = [1.0 if cid in relevant else 0.0 for cid in ranked_ids]
        rank = first_relevant_rank(ranked_ids, relevant)
        ranks.append(rank)
        row: dict = {
            "query": sample.query_text,
            "complexity": str(sample.complexity),
            "decision": str(answer.decision),
            "precision_at_k": precision_at_k(ranked_ids, relevant, k),
            "reciprocal_rank": (1.0 / rank) if rank is not None else 0.0,
            "ndcg_at_k": ndcg_at_k(gains, k),
        }
        if sample.reference_answer is not None and answer.decision == Decision.ANSWERED:
            row["bleu"] = bleu(answer.text, [sample.reference_answer])
            row["rouge1_f1"] = rouge_n(answer.text, sample.reference_answer, 1).f1
            row["rouge2_f1"] = rouge_n(answer.text, sample.reference_answer, 2).f1
            row["rougeL_f1"] = rouge_l(answer.text, sample.reference_answer).f1
        if sample.required_citations is not None:
            row["lcs_score"] = legal_consistency_score(answer.text, sample)
        per_query.append(row)

    aggregates: dict[str, float] = {}
    for column in METRIC_COLUMNS:
        values = [row[column] for row in per_query if column in row]
        if values:
            aggregates[column] = sum(values) / len(values)
    aggregates["mrr"] = mrr(ranks)
    return MetricsReport(
        k=k,
        per_query=per_query,
        aggregates=aggregates,
        metadata={
            "samples": len(samples),
            "bleu_smoothing": "add-one at n>=2",
            "gains": "binary relevance from relevant_chunk_ids",
        },
    )
