"""Evaluation dataset records and JSONL loading."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional


class Complexity(str, Enum):
    SIMPLE = "Simple"
    MODERATE = "Moderate"
    COMPLEX = "Complex"

    def __str__(self) -> str:
        return self.value


class DatasetError(Exception):
    pass


@dataclass
class EvalSample:
    query_text: str
    relevant_chunk_ids: frozenset[str]
    reference_answer: Optional[str] = None
    required_citations: Optional[frozenset[str]] = None
    complexity: Complexity = Complexity.SIMPLE

    def __post_init__(self) -> None:
        if not self.relevant_chunk_ids:
            raise DatasetError("relevant_chunk_ids must be non-empty")
        self.relevant_chunk_ids = frozenset(self.relevant_chunk_ids)
        if self.required_citations is not None:
            self.required_citations = frozenset(self.required_citations)
        self.complexity = Complexity(self.complexity)


def load_eval_samples(path: str | Path) -> list[EvalSample]:
    """Read line-delimited JSON samples with fields query,
    relevant_chunk_ids, reference_answer, required_citations, complexity."""
    p = Path(path)
    if not p.exists():
        raise DatasetError(f"eval dataset does not exist: {p}")
    samples: list[EvalSample] = []
    for line_no, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
        try:
            samples.append(
                EvalSample(
                    query_text=record["query"],
                    relevant_chunk_ids=frozenset(record["relevant_chunk_ids"]),
                    reference_answer=record.get("reference_answer"),
                    required_citations=(
                        frozenset(record["required_citations"])
                        if record.get("required_citations") is not None
                        else None
                    ),
                    complexity=Complexity(record.get("complexity", "Simple")),
                )
            )
        except (KeyError, ValueError, DatasetError) as exc:
            raise DatasetError(f"line {line_no}: {exc}") from exc
    return samples
