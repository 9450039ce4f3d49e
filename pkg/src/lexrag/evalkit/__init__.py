from .benchmark import (
    IndexConfig,
    LATENCY_CSV_HEADER,
    LatencyReport,
    LatencyStats,
    compare_indexes,
    default_comparison_configs,
    estimate_memory_bytes,
    latency_benchmark,
)
from .consistency import (
    cited_identifiers,
    consistency_variation,
    legal_consistency_score,
    variation_rate,
)
from .dataset import Complexity, DatasetError, EvalSample, load_eval_samples
from .overlap import RougeScore, bleu, rouge_l, rouge_n
from .ranking import first_relevant_rank, mrr, ndcg_at_k, precision_at_k
from .report import METRIC_COLUMNS, MetricsReport, evaluate_pipeline

__all__ = [
    "Complexity",
    "DatasetError",
    "EvalSample",
    "IndexConfig",
    "LATENCY_CSV_HEADER",
    "LatencyReport",
    "LatencyStats",
    "METRIC_COLUMNS",
    "MetricsReport",
    "RougeScore",
    "bleu",
    "cited_identifiers",
    "compare_indexes",
    "consistency_variation",
    "default_comparison_configs",
    "estimate_memory_bytes",
    "evaluate_pipeline",
    "first_relevant_rank",
    "latency_benchmark",
    "legal_consistency_score",
    "load_eval_samples",
    "mrr",
    "ndcg_at_k",
    "precision_at_k",
    "rouge_l",
    "rouge_n",
    "variation_rate",
]
