"""Legal domain labels and keyword-based domain assignment."""

from __future__ import annotations

import re
from enum import Enum


class DomainLabel(str, Enum):
    CRIMINAL = "CriminalLaw"
    CIVIL = "CivilLaw"
    CONTRACT = "ContractLaw"
    CONSTITUTIONAL = "ConstitutionalLaw"
    GENERAL = "General"

    def __str__(self) -> str:  # keep JSON/log output as the bare label
        return self.value


# Tie-break order for assign_domain: Criminal < Civil < Contract < Constitutional.
_TIE_ORDER = {
    DomainLabel.CRIMINAL: 0,
    DomainLabel.CIVIL: 1,
    DomainLabel.CONTRACT: 2,
    DomainLabel.CONSTITUTIONAL: 3,
    DomainLabel.GENERAL: 4,
}

DEFAULT_LEXICON: dict[str, DomainLabel] = {
    # criminal
    "murder": DomainLabel.CRIMINAL,
    "theft": DomainLabel.CRIMINAL,
    "ipc": DomainLabel.CRIMINAL,
    "crpc": DomainLabel.CRIMINAL,
    "punishment": DomainLabel.CRIMINAL,
    "imprisonment": DomainLabel.CRIMINAL,
    "offence": DomainLabel.CRIMINAL,
    "accused": DomainLabel.CRIMINAL,
    "bail": DomainLabel.CRIMINAL,
    "cheating": DomainLabel.CRIMINAL,
    "criminal": DomainLabel.CRIMINAL,
    "fir": DomainLabel.CRIMINAL,
    "robbery": DomainLabel.CRIMINAL,
    "kidnapping": DomainLabel.CRIMINAL,
    "dowry": DomainLabel.CRIMINAL,
    # civil
    "civil": DomainLabel.CIVIL,
    "decree": DomainLabel.CIVIL,
    "injunction": DomainLabel.CIVIL,
    "divorce": DomainLabel.CIVIL,
    "custody": DomainLabel.CIVIL,
    "succession": DomainLabel.CIVIL,
    "inheritance": DomainLabel.CIVIL,
    "negligence": DomainLabel.CIVIL,
    "tort": DomainLabel.CIVIL,
    "res judicata": DomainLabel.CIVIL,
    "limitation": DomainLabel.CIVIL,
    "maintenance": DomainLabel.CIVIL,
    "partition suit": DomainLabel.CIVIL,
    "evidence": DomainLabel.CIVIL,
    # contract
    "contract": DomainLabel.CONTRACT,
    "breach": DomainLabel.CONTRACT,
    "agreement": DomainLabel.CONTRACT,
    "consideration": DomainLabel.CONTRACT,
    "indemnity": DomainLabel.CONTRACT,
    "damages": DomainLabel.CONTRACT,
    "offer": DomainLabel.CONTRACT,
    "acceptance": DomainLabel.CONTRACT,
    "bailment": DomainLabel.CONTRACT,
    "guarantee": DomainLabel.CONTRACT,
    "rescission": DomainLabel.CONTRACT,
    "promisee": DomainLabel.CONTRACT,
    # constitutional
    "constitution": DomainLabel.CONSTITUTIONAL,
    "constitutional": DomainLabel.CONSTITUTIONAL,
    "article": DomainLabel.CONSTITUTIONAL,
    "fundamental rights": DomainLabel.CONSTITUTIONAL,
    "writ": DomainLabel.CONSTITUTIONAL,
    "amendment": DomainLabel.CONSTITUTIONAL,
    "directive principles": DomainLabel.CONSTITUTIONAL,
    "judicial review": DomainLabel.CONSTITUTIONAL,
    "basic structure": DomainLabel.CONSTITUTIONAL,
    "free speech": DomainLabel.CONSTITUTIONAL,
}


def _compile_lexicon(lexicon: dict[str, DomainLabel]) -> re.Pattern:
    # Longest keywords first so multi-word phrases win over their prefixes.
    keys = sorted((k.lower() for k in lexicon), key=len, reverse=True)
    return re.compile(r"\b(?:" + "|".join(re.escape(k) for k in keys) + r")\b")


def assign_domain(text: str, lexicon: dict[str, DomainLabel] | None = None) -> DomainLabel:
    """Pick the domain whose lexicon keywords hit most often in ``text``.

    Matching is case-insensitive and whole-word; ties go to the fixed label
    order Criminal < Civil < Contract < Constitutional; zero hits fall back
    to General.
    """
    if lexicon is None:
        lexicon = DEFAULT_LEXICON
    if not lexicon:
        raise ValueError("lexicon must be non-empty")
    lowered = {k.lower(): v for k, v in lexicon.items()}
    counts: dict[DomainLabel, int] = {}
    for match in _compile_lexicon(lexicon).finditer(text.lower()):
        label = lowered[match.group(0)]
        counts[label] = counts.get(label, 0) + 1
    if not counts:
        return DomainLabel.GENERAL
    return min(counts, key=lambda label: (-counts[label], _TIE_ORDER[label]))
