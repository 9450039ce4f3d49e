"""Document loading, normalization and deduplication for the legal corpus."""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional

from .domains import DomainLabel


class CorpusError(Exception):
    """Raised for unreadable sources, malformed records, or duplicate ids."""


@dataclass
class Document:
    """One source legal text plus its metadata."""

    id: str
    title: str = ""
    body: str = ""
    source_uri: str = ""
    domain: Optional[DomainLabel] = None
    citation_count: int = 0

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusError("document id must be non-empty")
        if self.citation_count < 0:
            raise CorpusError(f"citation_count must be >= 0, got {self.citation_count}")


# Whitespace run handling: runs holding 2+ newlines are paragraph breaks and
# become exactly two newlines; every other run collapses to a single space.
_WS_RUN = re.compile(r"\s+")


def normalize_text(raw: str) -> str:
    """Canonicalize raw text: NFC, control chars stripped, whitespace collapsed.

    Idempotent: normalize_text(normalize_text(x)) == normalize_text(x).
    """
    text = unicodedata.normalize("NFC", raw)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = "".join(
        ch for ch in text if ch in ("\n", "\t") or unicodedata.category(ch) != "Cc"
    )

    def _collapse(match: re.Match) -> str:
        return "\n\n" if match.group(0).count("\n") >= 2 else " "

    return _WS_RUN.sub(_collapse, text).strip()


def normalize_document(doc: Document) -> Document:
    """Return a copy of ``doc`` with a normalized body."""
    return replace(doc, body=normalize_text(doc.body))


def correct_spelling(text: str, corrector: Optional[Callable[[str], str]] = None) -> str:
    """Spell-correction hook; identity until a corrector is installed."""
    return corrector(text) if corrector is not None else text


_JSONL_FIELDS = {"id", "title", "body", "source_uri", "domain", "citation_count"}


def _document_from_record(record: dict, line_no: int) -> Document:
    if not isinstance(record, dict):
        raise CorpusError(f"line {line_no}: record is not a JSON object")
    unknown = set(record) - _JSONL_FIELDS
    if unknown:
        raise CorpusError(f"line {line_no}: unknown fields {sorted(unknown)}")
    doc_id = record.get("id")
    body = record.get("body")
    if not doc_id or not isinstance(doc_id, str):
        raise CorpusError(f"line {line_no}: missing or invalid 'id'")
    if not body or not isinstance(body, str):
        raise CorpusError(f"line {line_no}: missing or invalid 'body'")
    domain = None
    if record.get("domain") is not None:
        try:
            domain = DomainLabel(record["domain"])
        except ValueError:
            raise CorpusError(
                f"line {line_no}: unknown domain label {record['domain']!r}"
            ) from None
    citation_count = record.get("citation_count", 0)
    if not isinstance(citation_count, int) or citation_count < 0:
        raise CorpusError(f"line {line_no}: citation_count must be a non-negative int")
    return Document(
        id=doc_id,
        title=record.get("title", ""),
        body=body,
        source_uri=record.get("source_uri", ""),
        domain=domain,
        citation_count=citation_count,
    )


def load_documents(source: str | Path) -> list[Document]:
    """Load documents from a JSONL record file or a directory of .txt files.

    JSONL records carry at minimum ``id`` and ``body``; a directory maps
    filename (stem) to id and file contents to body. Duplicate ids are an
    error naming the offending id.
    """
    path = Path(source)
    if not path.exists():
        raise CorpusError(f"source does not exist: {path}")

    docs: list[Document] = []
    if path.is_dir():
        for txt in sorted(path.glob("*.txt")):
            try:
                body = txt.read_text(encoding="utf-8")
            except OSError as exc:
                raise CorpusError(f"unreadable file {txt}: {exc}") from exc
            docs.append(Document(id=txt.stem, title=txt.stem, body=body))
    else:
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise CorpusError(f"unreadable file {path}: {exc}") from exc
        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {line_no}: invalid JSON ({exc.msg})") from exc
            docs.append(_document_from_record(record, line_no))

    seen: set[str] = set()
    for doc in docs:
        if doc.id in seen:
            raise CorpusError(f"duplicate document id: {doc.id!r}")
        seen.add(doc.id)
    return docs


def deduplicate(docs: list[Document]) -> list[Document]:
    """Drop documents whose bodies are byte-identical to an earlier one.

    Keyed on a 64-bit hash of the body; hash collisions fall back to a full
    byte comparison, so distinct bodies are never merged.
    """
    buckets: dict[bytes, list[str]] = {}
    survivors: list[Document] = []
    for doc in docs:
        digest = hashlib.blake2b(doc.body.encode("utf-8"), digest_size=8).digest()
        bodies = buckets.setdefault(digest, [])
        if any(body == doc.body for body in bodies):
            continue
        bodies.append(doc.body)
        survivors.append(doc)
    return survivors
