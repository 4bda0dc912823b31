"""Review/reply thread splitting and comment-to-reply alignment."""

from __future__ import annotations

import logging
import re
from typing import Sequence

from ..errors import SchemaMismatch
from ..extraction import ReviewAnalysis, analyze_review
from ..model import Comment, ReviewDocument
from ..prompts import load_template
from ..retrieval import cosine_similarity, paragraphs
from ..tsr import SynthesisPair
from ..util import extract_json_object, sha256_hex

logger = logging.getLogger(__name__)

_REPLY_HEADER_RE = re.compile(
    r"^\s*(?:[-=*#]{2,}\s*)?(author(?:s'?)?\s+(?:response|reply|rebuttal)|rebuttal|response\s+to\s+review(?:er)?s?)\b.*$",
    re.IGNORECASE | re.MULTILINE,
)

MAX_ALIGN_ATTEMPTS = 3


def split_thread(thread_text: str) -> tuple[str, str]:
    """Split a discussion thread into (review_text, reply_text) at the first
    author-response header."""
    match = _REPLY_HEADER_RE.search(thread_text)
    if match is None:
        raise SchemaMismatch("thread has no recognizable author-response header")
    review = thread_text[: match.start()].strip()
    reply = thread_text[match.end() :].strip()
    if not review or not reply:
        raise SchemaMismatch("thread must contain both review text and reply text")
    return review, reply


def _numbered(items: Sequence[str]) -> str:
    return "\n".join(f"{i}. {text}" for i, text in enumerate(items, start=1))


def _prompt_alignment(comments: Sequence[Comment], replies: Sequence[str], provider) -> dict[int, int] | None:
    template = load_template("reply_alignment")
    prompt = template.render(
        comments_numbered=_numbered([c.text for c in comments]),
        replies_numbered=_numbered(replies),
    )
    for _ in range(MAX_ALIGN_ATTEMPTS):
        raw = provider.complete(prompt, stage="alignment")
        try:
            payload = extract_json_object(raw)
            rows = payload["alignments"]
            mapping: dict[int, int] = {}
            for row in rows:
                c = int(row["comment"])
                r = int(row["reply"])
                if not 1 <= c <= len(comments) or not (r == -1 or 1 <= r <= len(replies)):
                    raise SchemaMismatch(f"alignment indices out of range: {row}")
                if c in mapping:
                    raise SchemaMismatch(f"comment {c} aligned twice")
                mapping[c] = r
            if set(mapping) != set(range(1, len(comments) + 1)):
                raise SchemaMismatch("every comment must be aligned exactly once")
            return mapping
        except (SchemaMismatch, KeyError, TypeError, ValueError) as exc:
            logger.info("alignment reply unusable: %s", exc)
            prompt = prompt + f"\n\nYour previous output could not be used: {exc}\nReturn ONLY the JSON object."
    return None


def _similarity_alignment(comments: Sequence[Comment], replies: Sequence[str], embedder) -> dict[int, int]:
    vectors = embedder.embed([c.text for c in comments] + list(replies), stage="alignment")
    comment_vecs = vectors[: len(comments)]
    reply_vecs = vectors[len(comments) :]
    mapping: dict[int, int] = {}
    for i, cv in enumerate(comment_vecs, start=1):
        scores = [cosine_similarity(cv, rv) for rv in reply_vecs]
        best = max(range(len(scores)), key=lambda j: scores[j]) if scores else -1
        mapping[i] = best + 1 if best >= 0 and scores[best] > 0 else -1
    return mapping


def pair_comments_with_responses(
    thread_text: str,
    provider,
    embedder=None,
    *,
    manuscript_id: str = "thread",
    engine=None,
) -> tuple[ReviewDocument, ReviewAnalysis, list[tuple[Comment, SynthesisPair]]]:
    """Extract comments from the review half of a thread and align each with
    the author reply paragraph that answers it.

    Alignment asks the provider first; if its output never parses, falls
    back to embedding similarity when an embedder is available. Comments
    with no aligned reply are dropped with a log line, never fabricated.
    Passing an engine routes analysis through its cache, so later drafting
    calls against the same review reuse the profile.
    """
    review_text, reply_text = split_thread(thread_text)
    review = ReviewDocument(
        id=f"thread-{sha256_hex(thread_text)[:12]}",
        manuscript_id=manuscript_id,
        raw_text=review_text,
    )
    if engine is not None:
        analysis, _ = engine.analyze(review)
    else:
        analysis = analyze_review(review, provider)
    replies = paragraphs(reply_text)
    if not analysis.comments or not replies:
        return review, analysis, []

    mapping = _prompt_alignment(analysis.comments, replies, provider)
    if mapping is None:
        if embedder is None:
            logger.warning("alignment unparseable and no embedder; dropping all %d comments", len(analysis.comments))
            return review, analysis, []
        logger.warning("alignment unparseable; falling back to embedding similarity")
        mapping = _similarity_alignment(analysis.comments, replies, embedder)

    pairs: list[tuple[Comment, SynthesisPair]] = []
    for idx, comment in enumerate(analysis.comments, start=1):
        reply_idx = mapping.get(idx, -1)
        if reply_idx == -1:
            logger.info("dropping %s: no aligned author reply", comment.id)
            continue
        pairs.append(
            (comment, SynthesisPair(comment_id=comment.id, original_response=replies[reply_idx - 1]))
        )
    return review, analysis, pairs
