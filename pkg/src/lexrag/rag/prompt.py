"""Deterministic prompt assembly from retrieved context blocks.

The system preamble ships as a versioned resource file; the assembled prompt
is byte-identical for identical inputs.
"""

from __future__ import annotations

from importlib import resources

PROMPT_VERSION = "v1"
DEFAULT_CHAR_BUDGET = 8000


def _load_preamble() -> str:
    ref = resources.files("lexrag.rag") / "resources" / f"prompt_{PROMPT_VERSION}.txt"
    return ref.read_text(encoding="utf-8").strip()


_PREAMBLE = _load_preamble()


def assemble_prompt(query_text: str, hits, char_budget: int = DEFAULT_CHAR_BUDGET) -> str:
    """Preamble, numbered context blocks in hit order, then the question.

    When the assembled prompt would exceed ``char_budget``, whole blocks are
    dropped from the lowest-ranked end; block 1 is always kept, and blocks are
    never truncated mid-text.
    """
    if not hits:
        raise ValueError("cannot assemble a prompt from zero hits")
    blocks = [
        f"[{i}] ({hit.doc_id}, {hit.chunk_id}) {hit.text}"
        for i, hit in enumerate(hits, start=1)
    ]
    question = f"Question: {query_text}"

    def _render(kept: list[str]) -> str:
        return "\n\n".join([_PREAMBLE, *kept, question])

    kept = list(blocks)
    while len(kept) > 1 and len(_render(kept)) > char_budget:
        kept.pop()
    return _render(kept)
