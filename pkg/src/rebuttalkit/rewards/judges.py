"""Judge calls backing the reward channels.

Each judge renders its template, asks the provider, and parses a JSON
object out of the reply; malformed replies get a bounded number of
corrective reprompts before JudgeParseError.
"""

from __future__ import annotations

import logging
from typing import Sequence

from ..errors import JudgeParseError, PreconditionError, SchemaMismatch
from ..model import parse_target_sequence
from ..prompts import load_negative_responses, load_template
from ..util import extract_json_object

logger = logging.getLogger(__name__)

MAX_PARSE_ATTEMPTS = 3

_REPROMPT = (
    "\n\nYour previous output could not be used: {error}\n"
    "Return ONLY the JSON object in the required format."
)


def score_format(rendered: str) -> int:
    """1 when the sequence parses into the three ordered blocks, else 0."""
    try:
        parse_target_sequence(rendered)
    except Exception:
        return 0
    return 1


def _judge_json(prompt: str, provider, stage: str, fields: dict[str, tuple[float, float]], *, max_attempts: int = MAX_PARSE_ATTEMPTS) -> dict[str, float]:
    """Run one judge call and pull named numeric fields within their ranges."""
    raw = None
    last_error = "no attempts made"
    for _ in range(max_attempts):
        raw = provider.complete(prompt, stage=stage)
        try:
            payload = extract_json_object(raw)
        except SchemaMismatch as exc:
            last_error = str(exc)
            prompt = prompt + _REPROMPT.format(error=last_error)
            continue
        out: dict[str, float] = {}
        problem = None
        for name, (lo, hi) in fields.items():
            value = payload.get(name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                problem = f"{name} must be a number"
                break
            if not lo <= value <= hi:
                problem = f"{name} must lie in [{lo}, {hi}], got {value}"
                break
            out[name] = float(value)
        if problem is None:
            return out
        last_error = problem
        prompt = prompt + _REPROMPT.format(error=problem)
    raise JudgeParseError(f"judge output unusable after {max_attempts} attempts: {last_error}", raw_output=raw)


def judge_reasoning(
    analysis: str,
    strategy: str,
    provider,
    gold: tuple[str, str] | None = None,
    *,
    comment_text: str = "",
) -> tuple[float, float]:
    """Score the reasoning blocks; against gold references when provided,
    otherwise on a reference-free rubric."""
    if gold is not None:
        prompt = load_template("judge_reasoning_gold").render(
            gold_analysis=gold[0],
            gold_strategy=gold[1],
            candidate_analysis=analysis,
            candidate_strategy=strategy,
        )
    else:
        prompt = load_template("judge_reasoning_rubric").render(
            comment_text=comment_text or "(not supplied)",
            candidate_analysis=analysis,
            candidate_strategy=strategy,
        )
    scores = _judge_json(
        prompt,
        provider,
        "judge-think",
        {"analysis_score": (1, 10), "strategy_score": (1, 10)},
    )
    return scores["analysis_score"], scores["strategy_score"]


def judge_response_quality(
    review_text: str,
    comment_text: str,
    evidence: str,
    response_text: str,
    provider,
) -> float:
    prompt = load_template("judge_response").render(
        comment_text=comment_text,
        review_text=review_text,
        evidence_text=evidence,
        response_text=response_text,
    )
    scores = _judge_json(prompt, provider, "judge-resp", {"response_score": (1, 10)})
    return scores["response_score"]


def judge_diversity(response_text: str, negatives: Sequence[str], provider) -> float:
    """Diversity score against the low-diversity exemplars."""
    if not negatives:
        raise PreconditionError("negatives must be non-empty; load_negative_responses() provides the built-ins")
    block = "\n\n---\n\n".join(negatives)
    prompt = load_template("judge_diversity").render(
        negative_examples=block,
        response_text=response_text,
    )
    scores = _judge_json(prompt, provider, "judge-div", {"diversity_score": (1, 10)})
    return scores["diversity_score"]


def negative_samples() -> list[str]:
    """Packaged low-diversity exemplars (re-exported for callers)."""
    return load_negative_responses()
