"""Immutable domain types.

All pipeline stages exchange these frozen dataclasses; JSON crossing the
process boundary is produced/consumed by the ``*_payload`` helpers so field
names stay stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..errors import OutOfRange, PreconditionError, SchemaMismatch, UnknownCategory
from . import taxonomy


def _require_text(value: str, what: str) -> None:
    if not isinstance(value, str) or not value.strip():
        raise PreconditionError(f"{what} must be non-empty text")


@dataclass(frozen=True)
class ManuscriptChunk:
    """One retrieval unit of a manuscript, in document order."""

    id: str
    ordinal: int
    text: str
    embedding: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        _require_text(self.id, "chunk id")
        _require_text(self.text, "chunk text")
        if self.ordinal < 0:
            raise PreconditionError("chunk ordinal must be >= 0")
        if self.embedding is not None:
            vec = tuple(float(x) for x in self.embedding)
            if not vec or not all(math.isfinite(x) for x in vec):
                raise PreconditionError("chunk embedding must be non-empty and finite")
            object.__setattr__(self, "embedding", vec)


@dataclass(frozen=True)
class ManuscriptDocument:
    id: str
    title: str
    body: str
    chunks: tuple[ManuscriptChunk, ...] = ()

    def __post_init__(self) -> None:
        _require_text(self.id, "manuscript id")
        object.__setattr__(self, "chunks", tuple(self.chunks))
        # ordinals are dense and unique so ties in ranking break stably
        ordinals = [c.ordinal for c in self.chunks]
        if ordinals != list(range(len(ordinals))):
            raise PreconditionError("chunk ordinals must be 0..n-1 in document order")
        ids = {c.id for c in self.chunks}
        if len(ids) != len(self.chunks):
            raise PreconditionError("chunk ids must be unique within a manuscript")

    def chunk_map(self) -> dict[str, ManuscriptChunk]:
        return {c.id: c for c in self.chunks}


@dataclass(frozen=True)
class ReviewDocument:
    id: str
    manuscript_id: str
    raw_text: str
    venue: str | None = None

    def __post_init__(self) -> None:
        _require_text(self.id, "review id")
        _require_text(self.raw_text, "review text")


@dataclass(frozen=True)
class Comment:
    """A single numbered weakness/question extracted from a review.

    ``distilled`` marks comments whose text is a faithful condensation rather
    than a verbatim span of the review.
    """

    id: str
    review_id: str
    ordinal: int
    text: str
    distilled: bool = False

    def __post_init__(self) -> None:
        _require_text(self.id, "comment id")
        _require_text(self.text, "comment text")
        if self.ordinal < 0:
            raise PreconditionError("comment ordinal must be >= 0")


@dataclass(frozen=True)
class MacroProfile:
    """Review-level reviewer portrait."""

    overall_stance: str
    overall_attitude: str
    dominant_concern: str
    reviewer_expertise: str
    confidence: int

    def __post_init__(self) -> None:
        if self.overall_stance not in taxonomy.OVERALL_STANCES:
            raise UnknownCategory(f"unknown overall_stance: {self.overall_stance!r}")
        if self.overall_attitude not in taxonomy.OVERALL_ATTITUDES:
            raise UnknownCategory(f"unknown overall_attitude: {self.overall_attitude!r}")
        if self.dominant_concern not in taxonomy.DOMINANT_CONCERNS:
            raise UnknownCategory(f"unknown dominant_concern: {self.dominant_concern!r}")
        if self.reviewer_expertise not in taxonomy.REVIEWER_EXPERTISE:
            raise UnknownCategory(f"unknown reviewer_expertise: {self.reviewer_expertise!r}")
        if not taxonomy.confidence_in_range(self.confidence):
            raise OutOfRange(f"confidence must be an integer in [1, 10], got {self.confidence!r}")


@dataclass(frozen=True)
class MicroAnalysis:
    """Per-comment classification."""

    comment_id: str
    category: str
    sub_category: str
    severity: str
    confidence: int

    def __post_init__(self) -> None:
        _require_text(self.comment_id, "comment_id")
        allowed = taxonomy.COMMENT_CATEGORIES.get(self.category)
        if allowed is None:
            raise UnknownCategory(f"unknown category: {self.category!r}")
        if self.sub_category not in allowed:
            raise UnknownCategory(
                f"sub_category {self.sub_category!r} not valid under category {self.category!r}"
            )
        if self.severity not in taxonomy.SEVERITIES:
            raise UnknownCategory(f"unknown severity: {self.severity!r}")
        if not taxonomy.confidence_in_range(self.confidence):
            raise OutOfRange(f"confidence must be an integer in [1, 10], got {self.confidence!r}")


@dataclass(frozen=True)
class ReviewerProfile:
    macro: MacroProfile
    per_comment: tuple[MicroAnalysis, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_comment", tuple(self.per_comment))
        ids = [m.comment_id for m in self.per_comment]
        if len(set(ids)) != len(ids):
            raise SchemaMismatch("duplicate comment_id in per-comment analyses")

    def analysis_for(self, comment_id: str) -> MicroAnalysis | None:
        for micro in self.per_comment:
            if micro.comment_id == comment_id:
                return micro
        return None


@dataclass(frozen=True)
class Strategy:
    """Ordered rebuttal plan; each step is one argumentative move."""

    steps: tuple[str, ...]

    def __post_init__(self) -> None:
        steps = tuple(s.strip() for s in self.steps)
        if not steps or any(not s for s in steps):
            raise PreconditionError("strategy needs at least one non-empty step")
        object.__setattr__(self, "steps", steps)

    def numbered(self) -> str:
        return "\n".join(f"{i}. {step}" for i, step in enumerate(self.steps, start=1))


@dataclass(frozen=True)
class RebuttalResponse:
    text: str

    def __post_init__(self) -> None:
        _require_text(self.text, "response text")


@dataclass(frozen=True)
class TraceEvent:
    """One pipeline-visible provider interaction."""

    stage: str
    model_id: str
    timestamp: str
    detail: str | None = None

    def to_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "stage": self.stage,
            "model_id": self.model_id,
            "timestamp": self.timestamp,
        }
        if self.detail is not None:
            payload["detail"] = self.detail
        return payload

    @classmethod
    def from_payload(cls, payload: Mapping[str, Any]) -> "TraceEvent":
        return cls(
            stage=str(payload["stage"]),
            model_id=str(payload["model_id"]),
            timestamp=str(payload["timestamp"]),
            detail=payload.get("detail"),
        )


PIPELINE_STAGES: tuple[str, ...] = ("analysis", "retrieval", "strategy", "response")


@dataclass(frozen=True)
class TsrRecord:
    """Full output of one drafting run for one comment."""

    manuscript_id: str
    review_id: str
    comment_id: str
    profile: ReviewerProfile
    strategy: Strategy
    response: RebuttalResponse
    retrieved_chunk_ids: tuple[str, ...] = ()
    provider_trace: tuple[TraceEvent, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "retrieved_chunk_ids", tuple(self.retrieved_chunk_ids))
        object.__setattr__(self, "provider_trace", tuple(self.provider_trace))
        if self.profile.analysis_for(self.comment_id) is None:
            raise PreconditionError(
                f"profile carries no analysis for comment {self.comment_id!r}"
            )
        stages = [e.stage for e in self.provider_trace]
        core = [s for s in stages if s in PIPELINE_STAGES]
        # retries repeat a stage; collapsed order must follow the pipeline
        collapsed = [s for i, s in enumerate(core) if i == 0 or core[i - 1] != s]
        if collapsed != [s for s in PIPELINE_STAGES if s in collapsed]:
            raise PreconditionError(f"trace stages out of pipeline order: {stages}")

    def to_payload(self) -> dict[str, Any]:
        from .profile import profile_to_payload

        return {
            "manuscript_id": self.manuscript_id,
            "review_id": self.review_id,
            "comment_id": self.comment_id,
            "profile": profile_to_payload(self.profile),
            "strategy": list(self.strategy.steps),
            "response": self.response.text,
            "retrieved_chunk_ids": list(self.retrieved_chunk_ids),
            "provider_trace": [e.to_payload() for e in self.provider_trace],
        }

    @classmethod
    def from_payload(cls, payload: Mapping[str, Any]) -> "TsrRecord":
        from .profile import profile_from_payload

        profile, _texts = profile_from_payload(payload["profile"])
        return cls(
            manuscript_id=str(payload["manuscript_id"]),
            review_id=str(payload["review_id"]),
            comment_id=str(payload["comment_id"]),
            profile=profile,
            strategy=Strategy(tuple(payload["strategy"])),
            response=RebuttalResponse(str(payload["response"])),
            retrieved_chunk_ids=tuple(payload.get("retrieved_chunk_ids", ())),
            provider_trace=tuple(TraceEvent.from_payload(e) for e in payload.get("provider_trace", ())),
        )
