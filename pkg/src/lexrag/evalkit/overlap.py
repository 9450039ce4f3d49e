"""Text-overlap metrics: BLEU and ROUGE, whitespace-tokenized after
lowercasing."""

from __future__ import annotations

import math
from collections import Counter
from typing import NamedTuple, Sequence


def _tokens(text: str) -> list[str]:
    return text.lower().split()


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: str, references: Sequence[str], max_n: int = 4) -> float:
    """Geometric mean of clipped n-gram precisions (n=1..max_n) times the
    brevity penalty.

    Zero counts at n >= 2 get add-one smoothing; a zero unigram overlap makes
    the whole score 0. The brevity penalty exp(1 - r/c) uses the reference
    length closest to the candidate's (ties to the shorter reference).
    """
    if not references:
        raise ValueError("references must be non-empty")
    cand = _tokens(candidate)
    if not cand:
        return 0.0
    ref_tokens = [_tokens(ref) for ref in references]

    log_sum = 0.0
    for n in range(1, max_n + 1):
        counts = _ngram_counts(cand, n)
        total = sum(counts.values())
        clipped = 0
        if counts:
            max_ref: Counter = Counter()
            for ref in ref_tokens:
                ref_counts = _ngram_counts(ref, n)
                for gram, c in ref_counts.items():
                    if c > max_ref[gram]:
                        max_ref[gram] = c
            clipped = sum(min(c, max_ref[gram]) for gram, c in counts.items())
        if n == 1:
            if clipped == 0:
                return 0.0
            precision = clipped / total
        elif clipped == 0:
            precision = (clipped + 1) / (total + 1)
        else:
            precision = clipped / total
        log_sum += math.log(precision)
    geo_mean = math.exp(log_sum / max_n)

    c = len(cand)
    r = min((len(ref) for ref in ref_tokens), key=lambda L: (abs(L - c), L))
    brevity = math.exp(1.0 - r / c) if c < r else 1.0
    return brevity * geo_mean


class RougeScore(NamedTuple):
    precision: float
    recall: float
    f1: float


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def rouge_n(candidate: str, reference: str, n: int) -> RougeScore:
    """N-gram overlap precision/recall/F1 for n in {1, 2}."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    cand_counts = _ngram_counts(_tokens(candidate), n)
    ref_counts = _ngram_counts(_tokens(reference), n)
    overlap = sum(min(c, ref_counts[gram]) for gram, c in cand_counts.items())
    cand_total = sum(cand_counts.values())
    ref_total = sum(ref_counts.values())
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return RougeScore(precision, recall, _f1(precision, recall))


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[-1]


def rouge_l(candidate: str, reference: str) -> RougeScore:
    """Longest-common-subsequence precision/recall/F1."""
    cand = _tokens(candidate)
    ref = _tokens(reference)
    lcs = _lcs_length(cand, ref)
    precision = lcs / len(cand) if cand else 0.0
    recall = lcs / len(ref) if ref else 0.0
    return RougeScore(precision, recall, _f1(precision, recall))
