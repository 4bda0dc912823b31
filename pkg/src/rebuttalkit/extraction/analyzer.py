"""Review analysis: one provider call turns a raw review into a reviewer
profile plus per-comment classifications, with bounded reprompting when the
reply does not parse."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass

from ..errors import ExtractionParseError, RebuttalError, SchemaMismatch
from ..model import Comment, ReviewDocument, ReviewerProfile
from ..model.profile import profile_from_payload
from ..prompts import load_template
from ..util import extract_json_object

logger = logging.getLogger(__name__)

MAX_PARSE_ATTEMPTS = 3

_REPROMPT = (
    "\n\nYour previous output could not be used: {error}\n"
    "Return ONLY the single valid JSON object described by the schema, with no other text."
)


@dataclass(frozen=True)
class ReviewAnalysis:
    """Extraction output: the profile plus the comments it classified,
    ordered as they appeared in the review."""

    review_id: str
    profile: ReviewerProfile
    comments: tuple[Comment, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "comments", tuple(self.comments))
        comment_ids = {c.id for c in self.comments}
        analysed = {m.comment_id for m in self.profile.per_comment}
        if comment_ids != analysed:
            raise SchemaMismatch(
                f"profile analyses {sorted(analysed)} do not match comments {sorted(comment_ids)}"
            )

    def comment(self, comment_id: str) -> Comment | None:
        for c in self.comments:
            if c.id == comment_id:
                return c
        return None

    def items(self) -> list[tuple[Comment, "object"]]:
        by_id = {m.comment_id: m for m in self.profile.per_comment}
        return [(c, by_id[c.id]) for c in self.comments]


def _normalize(text: str) -> str:
    return re.sub(r"\s+", " ", re.sub(r"[^\w\s]", " ", text.lower())).strip()


def analyze_review(
    review: ReviewDocument,
    provider,
    *,
    max_attempts: int = MAX_PARSE_ATTEMPTS,
) -> ReviewAnalysis:
    """Profile a review and extract its actionable comments.

    Comment ids are scoped to the review (``<review_id>:c<n>``, 1-based in
    review order). Comments whose text is not a verbatim span of the review
    (after whitespace/punctuation normalization) are flagged ``distilled``.
    """
    template = load_template("reviewer_stance")
    prompt = template.render(review_text=review.raw_text)
    normalized_review = _normalize(review.raw_text)
    last_error = "no attempts made"
    raw = None
    for attempt in range(max_attempts):
        raw = provider.complete(prompt, stage="analysis")
        try:
            payload = extract_json_object(raw)
            profile, texts = profile_from_payload(payload)
        except (SchemaMismatch, json.JSONDecodeError) as exc:
            last_error = str(exc)
            logger.info("analysis attempt %d unparseable: %s", attempt + 1, last_error)
            prompt = prompt + _REPROMPT.format(error=last_error)
            continue

        comments: list[Comment] = []
        remap: dict[str, str] = {}
        ok = True
        for ordinal, micro in enumerate(profile.per_comment):
            text = texts.get(micro.comment_id)
            if not text or not text.strip():
                last_error = f"comment_analysis entry {micro.comment_id} lacks comment_text"
                prompt = prompt + _REPROMPT.format(error=last_error)
                ok = False
                break
            cid = f"{review.id}:c{ordinal + 1}"
            remap[micro.comment_id] = cid
            distilled = _normalize(text) not in normalized_review
            comments.append(
                Comment(id=cid, review_id=review.id, ordinal=ordinal, text=text.strip(), distilled=distilled)
            )
        if not ok:
            continue

        remapped = ReviewerProfile(
            macro=profile.macro,
            per_comment=tuple(
                type(m)(
                    comment_id=remap[m.comment_id],
                    category=m.category,
                    sub_category=m.sub_category,
                    severity=m.severity,
                    confidence=m.confidence,
                )
                for m in profile.per_comment
            ),
        )
        return ReviewAnalysis(review_id=review.id, profile=remapped, comments=tuple(comments))
    raise ExtractionParseError(
        f"review analysis unparseable after {max_attempts} attempts: {last_error}",
        raw_output=raw,
    )


# Rule-based fallback for the experiment-demand gate. Phrases, not single
# hot words, so presentation fixes ("label the axes") stay untouched.
_DEMAND_PHRASES = (
    "compare",
    "comparison against",
    "baseline",
    "ablation",
    "additional experiment",
    "new experiment",
    "more experiments",
    "further experiments",
    "evaluate on",
    "test on",
    "benchmark",
    "shown to work on",
    "report results",
    "retrain",
    "re-run",
    "rerun the",
)


def keyword_experiment_demand(text: str) -> bool:
    lowered = text.lower()
    return any(phrase in lowered for phrase in _DEMAND_PHRASES)


def is_experiment_demand(comment_text: str, provider=None, *, max_attempts: int = MAX_PARSE_ATTEMPTS) -> bool:
    """Classifier-backed demand check; falls back to the keyword rule when
    no provider is given or its output never parses."""
    if provider is None:
        return keyword_experiment_demand(comment_text)
    template = load_template("experiment_demand")
    prompt = template.render(comment_text=comment_text)
    for attempt in range(max_attempts):
        raw = provider.complete(prompt, stage="actionable-filter")
        try:
            payload = extract_json_object(raw)
        except SchemaMismatch as exc:
            prompt = prompt + _REPROMPT.format(error=exc)
            continue
        verdict = payload.get("requires_new_experiments")
        if isinstance(verdict, bool):
            return verdict
        prompt = prompt + _REPROMPT.format(error="requires_new_experiments must be true or false")
    logger.warning("experiment-demand classifier unparseable; using keyword fallback")
    return keyword_experiment_demand(comment_text)


def filter_actionable(items, provider=None) -> list:
    """Drop comments that demand new experiments; keep review order.

    ``items`` is a sequence of (Comment, MicroAnalysis) pairs, as produced by
    ReviewAnalysis.items().
    """
    kept = []
    for comment, micro in items:
        try:
            demand = is_experiment_demand(comment.text, provider)
        except RebuttalError:
            raise
        if demand:
            logger.info("dropping %s: demands new experiments", comment.id)
            continue
        logger.info("keeping %s (%s / %s)", comment.id, micro.category, micro.sub_category)
        kept.append((comment, micro))
    return kept
