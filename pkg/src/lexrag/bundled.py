"""Paths to the bundled mini corpus and evaluation samples."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def _data_path(name: str) -> Path:
    return Path(str(resources.files("lexrag") / "data" / name))


def mini_corpus_path() -> Path:
    """60+ public-domain Indian legal text excerpts across four domains."""
    return _data_path("mini_corpus.jsonl")


def eval_samples_path() -> Path:
    """Evaluation queries with relevance judgments, references and citations."""
    return _data_path("eval_samples.jsonl")
