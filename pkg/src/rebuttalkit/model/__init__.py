"""Domain types, vocabularies and the tagged sequence format."""

from .profile import profile_from_payload, profile_json, profile_to_payload, validate_profile
from .sequence import (
    TAG_NAMES,
    TargetSequence,
    assemble_target_sequence,
    extract_block,
    parse_target_sequence,
)
from .types import (
    PIPELINE_STAGES,
    Comment,
    MacroProfile,
    ManuscriptChunk,
    ManuscriptDocument,
    MicroAnalysis,
    RebuttalResponse,
    ReviewDocument,
    ReviewerProfile,
    Strategy,
    TraceEvent,
    TsrRecord,
)

__all__ = [
    "PIPELINE_STAGES",
    "TAG_NAMES",
    "Comment",
    "MacroProfile",
    "ManuscriptChunk",
    "ManuscriptDocument",
    "MicroAnalysis",
    "RebuttalResponse",
    "ReviewDocument",
    "ReviewerProfile",
    "Strategy",
    "TargetSequence",
    "TraceEvent",
    "TsrRecord",
    "assemble_target_sequence",
    "extract_block",
    "parse_target_sequence",
    "profile_from_payload",
    "profile_json",
    "profile_to_payload",
    "validate_profile",
]
