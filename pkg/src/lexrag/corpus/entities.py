"""Rule-based extraction of statute, article and case-name references."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class EntityKind(str, Enum):
    STATUTE_SECTION = "StatuteSection"
    ARTICLE = "Article"
    CASE_NAME = "CaseName"


@dataclass(frozen=True)
class LegalEntity:
    kind: EntityKind
    surface: str
    span: tuple[int, int]


# A statute abbreviation is a token with at least two capitals (IPC, CrPC, CPC);
# this keeps sentence-initial words like "In" from being swallowed.
_ABBR = r"[A-Z][A-Za-z]*[A-Z][A-Za-z]*"
_ACT_NAME = r"(?:the\s+)?[A-Z][A-Za-z]*(?:\s+[A-Z][A-Za-z]*)*(?:,?\s+\d{4})?"
_NAME = r"[A-Z][\w.'&-]*(?:\s+(?:of|the|and|[A-Z][\w.'&-]*))*"

_PATTERN = re.compile(
    r"(?P<statute>"
    rf"(?:Section\s+\d+[A-Z]?(?:\(\w+\))*\s+of\s+{_ACT_NAME})"
    rf"|(?:(?:{_ABBR}\s+)?Section\s+\d+[A-Z]?(?:\(\w+\))*)"
    r")"
    r"|(?P<article>Article\s+\d+[A-Z]?(?:\([0-9A-Za-z]+\))*)"
    rf"|(?P<case>{_NAME}\s+vs?\.?\s+{_NAME})"
)

_GROUP_KINDS = {
    "statute": EntityKind.STATUTE_SECTION,
    "article": EntityKind.ARTICLE,
    "case": EntityKind.CASE_NAME,
}


def extract_entities(text: str) -> list[LegalEntity]:
    """Return non-overlapping legal references, scanned left to right.

    Recognizes statute sections ("IPC Section 420", "Section 73 of the Indian
    Contract Act, 1872"), constitutional articles ("Article 19(1)(a)"), and
    case names ("Kesavananda Bharati v. State of Kerala").
    """
    entities: list[LegalEntity] = []
    for match in _PATTERN.finditer(text):
        for group, kind in _GROUP_KINDS.items():
            surface = match.group(group)
            if surface is not None:
                entities.append(
                    LegalEntity(kind=kind, surface=surface, span=match.span(group))
                )
                break
    return entities
