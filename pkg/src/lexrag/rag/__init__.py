from .cache import QueryCache, make_cache_key
from .generate import (
    GenerationClientConfig,
    GenerationError,
    RemoteChatClient,
    extractive_answer,
)
from .guardrails import Decision, GuardrailPolicy, guard_query
from .pipeline import (
    Answer,
    Query,
    RagPipeline,
    RetrievalResult,
    RetrievedHit,
    Source,
)
from .prompt import DEFAULT_CHAR_BUDGET, PROMPT_VERSION, assemble_prompt

__all__ = [
    "Answer",
    "DEFAULT_CHAR_BUDGET",
    "Decision",
    "GenerationClientConfig",
    "GenerationError",
    "GuardrailPolicy",
    "PROMPT_VERSION",
    "Query",
    "QueryCache",
    "RagPipeline",
    "RemoteChatClient",
    "RetrievalResult",
    "RetrievedHit",
    "Source",
    "assemble_prompt",
    "extractive_answer",
    "guard_query",
    "make_cache_key",
]
