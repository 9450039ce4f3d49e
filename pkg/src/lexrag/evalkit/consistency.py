"""Citation-consistency scoring and repeat-query variation."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from ..corpus.entities import EntityKind, extract_entities
from ..rag.pipeline import Query, RagPipeline
from .dataset import EvalSample

_CITATION_KINDS = {EntityKind.STATUTE_SECTION, EntityKind.ARTICLE}


def _canonical(citation: str) -> str:
    return " ".join(citation.lower().split())


def cited_identifiers(text: str) -> set[str]:
    """Statute/article identifiers mentioned in ``text``, canonicalized."""
    return {
        _canonical(entity.surface)
        for entity in extract_entities(text)
        if entity.kind in _CITATION_KINDS
    }


def legal_consistency_score(answer_text: str, sample: EvalSample) -> float:
    """Harmonic mean of citation recall and citation precision.

    Citations are matched on canonical form (lowercased, whitespace
    collapsed). No mentions and no requirements scores 1.0.
    """
    if sample.required_citations is None:
        raise ValueError("sample has no required_citations")
    required = {_canonical(c) for c in sample.required_citations}
    mentioned = cited_identifiers(answer_text)
    if not required and not mentioned:
        return 1.0
    hit = len(required & mentioned)
    recall = hit / len(required) if required else 1.0
    precision = hit / len(mentioned) if mentioned else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def variation_rate(source_sets: Iterable[frozenset]) -> float:
    """1 - mean pairwise Jaccard similarity of the retrieved source-id sets."""
    sets = list(source_sets)
    if len(sets) < 2:
        raise ValueError("variation rate needs at least 2 runs")
    sims = [_jaccard(a, b) for a, b in combinations(sets, 2)]
    return 1.0 - sum(sims) / len(sims)


def consistency_variation(pipeline: RagPipeline, query: Query, n_runs: int) -> float:
    """Run the same query n_runs times (cache bypassed) and measure how much
    the retrieved source sets drift."""
    if n_runs < 2:
        raise ValueError(f"n_runs must be >= 2, got {n_runs}")
    sets = []
    for _ in range(n_runs):
        result = pipeline.retrieve(query, use_cache=False)
        sets.append(frozenset(hit.chunk_id for hit in result.hits))
    return variation_rate(sets)
