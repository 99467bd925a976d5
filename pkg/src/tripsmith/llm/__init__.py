"""Model-backed ranking and translation, fully mockable and failure-proof."""

from .endpoint import (
    CallableTransport,
    FaultInjectingTransport,
    HttpTransport,
    LlmEndpoint,
    RecordingTransport,
    ReplayTransport,
    Transport,
    TransportError,
    prompt_hash,
)
from .rank import (
    VALID_TYPE_HINTS,
    DegradationEvent,
    LlmRanker,
    load_prompt,
    merge_ranked_names,
    next_type_hint,
    parse_name_list,
    parse_type_hint,
)
from .translate import (
    DEFAULT_MAX_ROUNDS,
    TranslationRound,
    TranslationSession,
    nl2dsl,
)

__all__ = [
    "CallableTransport",
    "DEFAULT_MAX_ROUNDS",
    "DegradationEvent",
    "FaultInjectingTransport",
    "HttpTransport",
    "LlmEndpoint",
    "LlmRanker",
    "RecordingTransport",
    "ReplayTransport",
    "Transport",
    "TransportError",
    "TranslationRound",
    "TranslationSession",
    "VALID_TYPE_HINTS",
    "load_prompt",
    "merge_ranked_names",
    "next_type_hint",
    "nl2dsl",
    "parse_name_list",
    "parse_type_hint",
    "prompt_hash",
]
