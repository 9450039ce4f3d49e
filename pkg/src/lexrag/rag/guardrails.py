"""Confidence gating: turn weak or domain-ambiguous retrievals into
clarification requests instead of answers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Decision(str, Enum):
    ANSWERED = "answered"
    CLARIFY = "clarify"
    REFUSE = "refuse"

    def __str__(self) -> str:
        return self.value


DEFAULT_CLARIFY_TEMPLATE = (
    "I could not find legal provisions that clearly match your question "
    "({query!r}). Could you rephrase it or add the statute, article, or "
    "case you have in mind?"
)
DEFAULT_REFUSE_TEMPLATE = (
    "I cannot answer {query!r}: the retrieved material does not support a "
    "grounded response."
)


@dataclass
class GuardrailPolicy:
    min_top_score: float = 0.25
    ambiguity_gap: float = 0.05
    clarify_message_template: str = DEFAULT_CLARIFY_TEMPLATE
    refuse_message_template: str = DEFAULT_REFUSE_TEMPLATE

    def __post_init__(self) -> None:
        if not -1.0 <= self.min_top_score <= 1.0:
            raise ValueError(f"min_top_score must be in [-1, 1], got {self.min_top_score}")
        if not 0.0 <= self.ambiguity_gap <= 2.0:
            raise ValueError(f"ambiguity_gap must be in [0, 2], got {self.ambiguity_gap}")


def guard_query(hits, policy: GuardrailPolicy) -> Decision:
    """No evidence or a weak top hit asks for clarification; so does a
    near-tie between hits from different domains (ambiguous routing)."""
    if not hits or hits[0].score < policy.min_top_score:
        return Decision.CLARIFY
    if len(hits) >= 2:
        top, runner = hits[0], hits[1]
        if top.domain != runner.domain and (top.score - runner.score) < policy.ambiguity_gap:
            return Decision.CLARIFY
    return Decision.ANSWERED
