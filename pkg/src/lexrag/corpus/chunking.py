"""Overlap-preserving recursive character chunking of normalized documents."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .documents import Document
from .domains import DomainLabel

DEFAULT_SEPARATORS: tuple[str, ...] = ("\n\n", "\n", ". ", " ", "")


@dataclass
class ChunkPolicy:
    """Chunk sizing: 500-750 char chunks with 50-100 chars of overlap."""

    max_chunk_chars: int = 600
    overlap_chars: int = 75
    separator_hierarchy: tuple[str, ...] = DEFAULT_SEPARATORS

    def __post_init__(self) -> None:
        if self.overlap_chars >= self.max_chunk_chars:
            raise ValueError(
                f"overlap_chars ({self.overlap_chars}) must be smaller than "
                f"max_chunk_chars ({self.max_chunk_chars})"
            )
        if self.overlap_chars < 0:
            raise ValueError("overlap_chars must be >= 0")
        if not self.separator_hierarchy or self.separator_hierarchy[-1] != "":
            raise ValueError(
                "separator_hierarchy must end with the empty separator "
                "(character-level fallback)"
            )
        if not 500 <= self.max_chunk_chars <= 750:
            warnings.warn(
                f"max_chunk_chars={self.max_chunk_chars} is outside the "
                "recommended [500, 750] range",
                stacklevel=2,
            )
        if not 50 <= self.overlap_chars <= 100:
            warnings.warn(
                f"overlap_chars={self.overlap_chars} is outside the "
                "recommended [50, 100] range",
                stacklevel=2,
            )


@dataclass(frozen=True)
class Chunk:
    """A bounded segment of a document; the unit that gets embedded."""

    chunk_id: str
    doc_id: str
    text: str
    char_start: int
    char_end: int
    domain: DomainLabel
    seq: int


def _boundary(window: str, min_len: int, separators: tuple[str, ...]) -> int:
    """Cut length for the next piece: the last separator boundary that keeps
    the piece within the window, walking the hierarchy from coarsest to finest.
    The empty separator hard-splits at the full window."""
    for sep in separators:
        if sep == "":
            return len(window)
        pos = window.rfind(sep)
        if pos != -1 and pos + len(sep) >= min_len:
            return pos + len(sep)
    return len(window)


def split_chunks(doc: Document, policy: ChunkPolicy) -> list[Chunk]:
    """Split ``doc.body`` into overlap-prefixed chunks.

    Pieces are carved left to right; each boundary is found by trying the
    coarsest separator first and re-trying with finer ones, ending with a hard
    character split. Every chunk after the first starts with the final
    ``overlap_chars`` characters of its predecessor, and chunk offsets window
    the body directly, so the chunk spans cover [0, len(body)) exactly.
    """
    body = doc.body
    if not body:
        raise ValueError(f"document {doc.id!r} has an empty body")
    domain = doc.domain if doc.domain is not None else DomainLabel.GENERAL

    max_chars = policy.max_chunk_chars
    overlap = policy.overlap_chars

    cores: list[tuple[int, int]] = []
    pos = 0
    n = len(body)
    while pos < n:
        first = not cores
        budget = max_chars if first else max_chars - overlap
        if n - pos <= budget:
            end = n
        else:
            # A non-final first chunk must be long enough to donate a full
            # overlap prefix to its successor.
            min_len = overlap + 1 if first else 1
            end = pos + _boundary(body[pos : pos + budget], min_len, policy.separator_hierarchy)
        cores.append((pos, end))
        pos = end

    chunks: list[Chunk] = []
    for seq, (core_start, core_end) in enumerate(cores):
        if seq == 0:
            start = core_start
        else:
            prev_len = core_start - chunks[-1].char_start
            start = core_start - min(overlap, prev_len)
        chunks.append(
            Chunk(
                chunk_id=f"{doc.id}#{seq:04d}",
                doc_id=doc.id,
                text=body[start:core_end],
                char_start=start,
                char_end=core_end,
                domain=domain,
                seq=seq,
            )
        )
    return chunks
