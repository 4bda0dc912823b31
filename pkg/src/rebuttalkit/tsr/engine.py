"""Staged drafting pipeline: Analysis -> Retrieval -> Strategy -> Response.

The engine caches one analysis per review drafting several comments of
the same review reuses the profile instead of re-calling the provider.
"""

from __future__ import annotations

import logging
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Mapping, Sequence

from ..errors import EmptyCorpus, MalformedSequence, PreconditionError, RebuttalError, StageError
from ..extraction import ReviewAnalysis, analyze_review
from ..model import (
    Comment,
    ManuscriptDocument,
    RebuttalResponse,
    ReviewDocument,
    ReviewerProfile,
    Strategy,
    TraceEvent,
    TsrRecord,
    extract_block,
)
from ..model.profile import profile_json
from ..prompts import load_template
from ..retrieval import DEFAULT_TOP_K, RetrievalResult, retrieve_top_k

logger = logging.getLogger(__name__)

NO_EVIDENCE_MARKER = "No evidence was retrieved from the manuscript."


@dataclass(frozen=True)
class SynthesisPair:
    """A reviewer comment matched with the authors' original reply to it."""

    comment_id: str
    original_response: str

    def __post_init__(self) -> None:
        if not self.comment_id.strip():
            raise ValueError("comment_id must be non-empty")
        if not self.original_response.strip():
            raise ValueError("original_response must be non-empty")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def evidence_text(result: RetrievalResult | None, chunks: Mapping[str, str]) -> str:
    """Render retrieved chunks as labeled evidence; a fixed marker when empty."""
    if result is None or not result.ranked:
        return NO_EVIDENCE_MARKER
    parts = [f"[{cid}] {chunks[cid]}" for cid, _ in result.ranked]
    return "\n\n".join(parts)


def render_tsr_prompt(review_text: str, comment_text: str, evidence: str) -> str:
    """The single-pass drafting instruction, as used for corpus rows and
    candidate sampling."""
    return load_template("tsr_single_pass").render(
        review_text=review_text,
        comment_text=comment_text,
        evidence_text=evidence,
    )


def apply_strategy_override(prompt: str, steps: Sequence[str]) -> str:
    """Steer sampling toward an author-edited plan.

    The numbered plan is appended to the drafting instruction so every
    candidate drawn from the prompt is conditioned on it.
    """
    cleaned = [step.strip() for step in steps]
    if not cleaned or any(not step for step in cleaned):
        raise PreconditionError("strategy override steps must be non-empty")
    plan = "\n".join(f"{i}. {step}" for i, step in enumerate(cleaned, start=1))
    return f"{prompt}\n\nFollow this revised rebuttal plan:\n{plan}\n"


_STEP_SPLIT_RE = re.compile(r"(?:^|\n|;)\s*\d+[.)]\s+")


def parse_strategy_block(block: str) -> Strategy:
    text = block.strip()
    if not text:
        raise MalformedSequence("strategy block is empty")
    parts = [p.strip().rstrip(";").strip() for p in _STEP_SPLIT_RE.split(text)]
    steps = [p for p in parts if p]
    if not steps:
        raise MalformedSequence("strategy block has no usable steps")
    return Strategy(tuple(steps))


def generate_strategy(
    profile: ReviewerProfile,
    comment: Comment,
    evidence: str,
    provider,
) -> Strategy:
    """One provider call producing the numbered rebuttal plan."""
    prompt = load_template("strategy").render(
        profile_json=profile_json(profile),
        comment_text=comment.text,
        evidence_text=evidence,
    )
    reply = provider.complete(prompt, stage="strategy")
    block = extract_block(reply, "strategy")
    if block is None:
        raise MalformedSequence("provider reply lacks a <strategy> block")
    return parse_strategy_block(block)


def generate_response(
    review: ReviewDocument,
    comment: Comment,
    profile: ReviewerProfile,
    strategy: Strategy,
    evidence: str,
    provider,
    original_response: str | None = None,
) -> RebuttalResponse:
    """One provider call producing the final response text.

    ``original_response`` is included (synthesis mode) as refinement
    reference; inference mode omits that section entirely.
    """
    section = ""
    if original_response is not None:
        section = f"\nOriginal author response (reference for refinement):\n{original_response}\n"
    prompt = load_template("response").render(
        review_text=review.raw_text,
        comment_text=comment.text,
        profile_json=profile_json(profile),
        strategy_steps=strategy.numbered(),
        evidence_text=evidence,
        original_response_section=section,
    )
    reply = provider.complete(prompt, stage="response")
    block = extract_block(reply, "response")
    if block is None or not block.strip():
        raise MalformedSequence("provider reply lacks a non-empty <response> block")
    return RebuttalResponse(block.strip())


class TsrEngine:
    """Orchestrates the four pipeline stages for one comment at a time."""

    def __init__(
        self,
        chat,
        embedder=None,
        *,
        k: int = DEFAULT_TOP_K,
        embedding_cache=None,
        clock: Callable[[], str] = _now,
    ) -> None:
        self.chat = chat
        self.embedder = embedder
        self.k = k
        self.embedding_cache = embedding_cache
        self._clock = clock
        self._analyses: dict[str, ReviewAnalysis] = {}
        self._lock = threading.Lock()

    def analyze(self, review: ReviewDocument) -> tuple[ReviewAnalysis, bool]:
        """Analysis for a review, cached per review id; returns (analysis,
        was_cached)."""
        with self._lock:
            hit = self._analyses.get(review.id)
        if hit is not None:
            return hit, True
        analysis = analyze_review(review, self.chat)
        with self._lock:
            self._analyses.setdefault(review.id, analysis)
            return self._analyses[review.id], False

    def _retrieve(self, comment: Comment, manuscript: ManuscriptDocument) -> RetrievalResult | None:
        if self.embedder is None or not manuscript.chunks:
            # absent evidence does not abort a draft; prompts carry a marker
            logger.info("no retrieval possible for %s; drafting without evidence", comment.id)
            return None
        try:
            return retrieve_top_k(comment, manuscript.chunks, self.k, self.embedder, self.embedding_cache)
        except EmptyCorpus:
            return None

    def evidence_for(
        self,
        manuscript: ManuscriptDocument,
        review: ReviewDocument,
        comment_id: str,
    ) -> tuple[Comment, str]:
        """Analysis plus retrieval only: the comment and its rendered
        evidence, for callers that sample drafts outside the staged flow."""
        if review.manuscript_id != manuscript.id:
            raise PreconditionError(
                f"review {review.id} belongs to manuscript {review.manuscript_id}, not {manuscript.id}"
            )
        analysis, _ = self.analyze(review)
        comment = analysis.comment(comment_id)
        if comment is None:
            raise PreconditionError(
                f"comment {comment_id!r} not found in review {review.id}; "
                f"known: {[c.id for c in analysis.comments]}"
            )
        retrieval = self._retrieve(comment, manuscript)
        chunk_texts = {c.id: c.text for c in manuscript.chunks}
        return comment, evidence_text(retrieval, chunk_texts)

    def run_tsr(
        self,
        manuscript: ManuscriptDocument,
        review: ReviewDocument,
        comment_id: str,
        *,
        original_response: str | None = None,
        on_stage: Callable[[str, str], None] | None = None,
    ) -> TsrRecord:
        if review.manuscript_id != manuscript.id:
            raise PreconditionError(
                f"review {review.id} belongs to manuscript {review.manuscript_id}, not {manuscript.id}"
            )

        def notify(stage: str, status: str) -> None:
            if on_stage is not None:
                on_stage(stage, status)

        trace: list[TraceEvent] = []

        def run_stage(stage: str, fn: Callable[[], object], detail: str | None = None) -> object:
            notify(stage, "started")
            try:
                result = fn()
            except RebuttalError as exc:
                notify(stage, "failed")
                raise StageError(stage, exc) from exc
            trace.append(TraceEvent(stage=stage, model_id=self._model_for(stage), timestamp=self._clock(), detail=detail))
            notify(stage, "finished")
            return result

        analysis_meta: dict[str, bool] = {}

        def do_analysis() -> ReviewAnalysis:
            analysis, cached = self.analyze(review)
            analysis_meta["cached"] = cached
            return analysis

        analysis = run_stage("analysis", do_analysis)
        assert isinstance(analysis, ReviewAnalysis)
        if analysis_meta.get("cached"):
            trace[-1] = TraceEvent(
                stage="analysis", model_id=trace[-1].model_id, timestamp=trace[-1].timestamp, detail="cached"
            )

        comment = analysis.comment(comment_id)
        if comment is None:
            raise PreconditionError(
                f"comment {comment_id!r} not found in review {review.id}; "
                f"known: {[c.id for c in analysis.comments]}"
            )

        retrieval = run_stage("retrieval", lambda: self._retrieve(comment, manuscript))
        chunk_texts = {c.id: c.text for c in manuscript.chunks}
        evidence = evidence_text(retrieval, chunk_texts)  # type: ignore[arg-type]

        strategy = run_stage(
            "strategy", lambda: generate_strategy(analysis.profile, comment, evidence, self.chat)
        )
        assert isinstance(strategy, Strategy)
        response = run_stage(
            "response",
            lambda: generate_response(
                review, comment, analysis.profile, strategy, evidence, self.chat, original_response
            ),
        )
        assert isinstance(response, RebuttalResponse)

        chunk_ids = retrieval.chunk_ids if isinstance(retrieval, RetrievalResult) else ()
        unknown = [cid for cid in chunk_ids if cid not in chunk_texts]
        if unknown:
            raise StageError("retrieval", PreconditionError(f"retrieved unknown chunk ids: {unknown}"))
        return TsrRecord(
            manuscript_id=manuscript.id,
            review_id=review.id,
            comment_id=comment.id,
            profile=analysis.profile,
            strategy=strategy,
            response=response,
            retrieved_chunk_ids=chunk_ids,
            provider_trace=tuple(trace),
        )

    def _model_for(self, stage: str) -> str:
        if stage == "retrieval":
            return self.embedder.model_id if self.embedder is not None else "none"
        return self.chat.model_id
