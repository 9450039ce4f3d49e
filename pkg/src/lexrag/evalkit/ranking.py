"""Ranking metrics: Precision@K, MRR, NDCG."""

from __future__ import annotations

import math
from typing import Optional, Sequence


def precision_at_k(ranked: Sequence[str], relevant: set, k: int) -> float:
    """|top-k intersect relevant| / k; the denominator stays k even when fewer
    results were returned."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return len(set(ranked[:k]) & set(relevant)) / k


def first_relevant_rank(ranked: Sequence[str], relevant: set) -> Optional[int]:
    """1-based rank of the first relevant id, or None if none was retrieved."""
    for i, item in enumerate(ranked, start=1):
        if item in relevant:
            return i
    return None


def mrr(first_relevant_ranks: Sequence[Optional[int]]) -> float:
    """Mean of 1/rank over queries; a query with no relevant result counts 0."""
    if not first_relevant_ranks:
        return 0.0
    total = 0.0
    for rank in first_relevant_ranks:
        if rank is None:
            continue
        if rank < 1:
            raise ValueError(f"ranks must be >= 1, got {rank}")
        total += 1.0 / rank
    return total / len(first_relevant_ranks)


def ndcg_at_k(gains: Sequence[float], k: int) -> float:
    """DCG over the ranked gains normalized by the ideal (descending) order;
    defined as 0 when the ideal DCG is 0."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if any(g < 0 for g in gains):
        raise ValueError("gains must be non-negative")

    def dcg(values: Sequence[float]) -> float:
        return sum(g / math.log2(i + 1) for i, g in enumerate(values[:k], start=1))

    ideal = dcg(sorted(gains, reverse=True))
    if ideal == 0.0:
        return 0.0
    return dcg(list(gains)) / ideal
