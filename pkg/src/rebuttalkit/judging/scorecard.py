"""Four-dimension response scorecard and the judge call that fills it."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Mapping

from ..errors import JudgeParseError, OutOfRange, SchemaMismatch
from ..prompts import load_template
from ..util import extract_json_object

logger = logging.getLogger(__name__)

SCORE_DIMENSIONS: tuple[str, ...] = ("Attitude", "Clarity", "Persuasiveness", "Constructiveness")

MAX_PARSE_ATTEMPTS = 3

_REPROMPT = (
    "\n\nYour previous output could not be used: {error}\n"
    "Return ONLY the JSON object in the required format."
)


def _check_dim(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise OutOfRange(f"{name} must be an integer, got {value!r}")
    if not 0 <= value <= 10:
        raise OutOfRange(f"{name} must lie in [0, 10], got {value}")
    return value


@dataclass(frozen=True)
class ScoreCard:
    """Attitude/Clarity/Persuasiveness/Constructiveness on 0-10 plus the
    judge's explanation; ``overall`` is an optional independent holistic
    score, never derived from the four dimensions."""

    attitude: int
    clarity: int
    persuasiveness: int
    constructiveness: int
    explanation: str
    overall: int | None = None

    def __post_init__(self) -> None:
        _check_dim(self.attitude, "Attitude")
        _check_dim(self.clarity, "Clarity")
        _check_dim(self.persuasiveness, "Persuasiveness")
        _check_dim(self.constructiveness, "Constructiveness")
        if not self.explanation.strip():
            raise SchemaMismatch("score_explanation must be non-empty")
        if self.overall is not None:
            _check_dim(self.overall, "Overall")

    def dimension_scores(self) -> dict[str, int]:
        return {
            "Attitude": self.attitude,
            "Clarity": self.clarity,
            "Persuasiveness": self.persuasiveness,
            "Constructiveness": self.constructiveness,
        }

    def to_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "score": self.dimension_scores(),
            "score_explanation": self.explanation,
        }
        if self.overall is not None:
            payload["score"]["Overall"] = self.overall
        return payload


def scorecard_from_payload(payload: Mapping[str, Any]) -> ScoreCard:
    if not isinstance(payload, Mapping):
        raise SchemaMismatch("scorecard payload must be an object")
    score = payload.get("score")
    if not isinstance(score, Mapping):
        raise SchemaMismatch("scorecard payload needs a 'score' object")
    missing = [d for d in SCORE_DIMENSIONS if d not in score]
    if missing:
        raise SchemaMismatch(f"score object missing dimensions: {missing}")
    unknown = set(score) - set(SCORE_DIMENSIONS) - {"Overall"}
    if unknown:
        raise SchemaMismatch(f"score object has unknown dimensions: {sorted(unknown)}")
    explanation = payload.get("score_explanation")
    if not isinstance(explanation, str) or not explanation.strip():
        raise SchemaMismatch("score_explanation must be non-empty text")
    overall = score.get("Overall")
    return ScoreCard(
        attitude=_check_dim(score["Attitude"], "Attitude"),
        clarity=_check_dim(score["Clarity"], "Clarity"),
        persuasiveness=_check_dim(score["Persuasiveness"], "Persuasiveness"),
        constructiveness=_check_dim(score["Constructiveness"], "Constructiveness"),
        explanation=explanation,
        overall=_check_dim(overall, "Overall") if overall is not None else None,
    )


def judge_scorecard(
    review_text: str,
    comment_text: str,
    evidence: str,
    response_text: str,
    provider,
    *,
    max_attempts: int = MAX_PARSE_ATTEMPTS,
) -> ScoreCard:
    """Score one response on the four dimensions.

    Prose around the JSON is tolerated; a reply whose JSON stays invalid
    through the retry budget raises JudgeParseError.
    """
    prompt = load_template("scorecard").render(
        review_text=review_text,
        evidence_text=evidence,
        comment_text=comment_text,
        response_text=response_text,
    )
    raw = None
    last_error = "no attempts made"
    for _ in range(max_attempts):
        raw = provider.complete(prompt, stage="judge-scorecard")
        try:
            return scorecard_from_payload(extract_json_object(raw))
        except SchemaMismatch as exc:
            last_error = str(exc)
            logger.info("scorecard reply unusable: %s", last_error)
            prompt = prompt + _REPROMPT.format(error=last_error)
    raise JudgeParseError(f"scorecard unusable after {max_attempts} attempts: {last_error}", raw_output=raw)
