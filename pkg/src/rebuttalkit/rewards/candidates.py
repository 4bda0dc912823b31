"""Candidate groups: sample G drafts, score each, pick the best.

Sampling derives one seed per candidate (base+i) so members differ from
each other yet every run with the same base seed reproduces byte-identical
groups, cache included.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from ..errors import EmptyGroup, MalformedSequence
from ..model import parse_target_sequence
from ..model.sequence import extract_block
from ..util import sha256_hex
from .composite import DEFAULT_WEIGHTS, RewardBreakdown, RewardWeights, composite_reward
from .grpo import group_advantages
from .judges import judge_diversity, judge_reasoning, judge_response_quality, score_format

logger = logging.getLogger(__name__)

DEFAULT_GROUP_SIZE = 5
FLOOR_SCORE = 1.0  # judge-scale floor for blocks that cannot be scored


@dataclass(frozen=True)
class Candidate:
    text: str
    breakdown: RewardBreakdown


@dataclass(frozen=True)
class CandidateGroup:
    """A scored group with group-normalized advantages.

    Advantages are centered exactly; their population std is 1 up to the
    stabilizing floor in the normalizer, except all-equal groups, whose
    advantages are all zero.
    """

    prompt_id: str
    candidates: tuple[Candidate, ...]
    advantages: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "advantages", tuple(float(a) for a in self.advantages))
        if not self.candidates:
            raise EmptyGroup("candidate group is empty")
        if len(self.candidates) != len(self.advantages):
            raise ValueError("one advantage per candidate required")
        if any(not math.isfinite(a) for a in self.advantages):
            raise ValueError("advantages must be finite")
        if any(abs(a) > 0 for a in self.advantages):
            mean = sum(self.advantages) / len(self.advantages)
            if abs(mean) > 1e-6:
                raise ValueError(f"advantages must be centered, mean={mean}")

    @property
    def size(self) -> int:
        return len(self.candidates)

    def totals(self) -> list[float]:
        return [c.breakdown.total for c in self.candidates]

    def to_payload(self) -> dict:
        return {
            "prompt_id": self.prompt_id,
            "size": self.size,
            "candidates": [
                {"text": c.text, "reward": c.breakdown.to_payload(), "advantage": a}
                for c, a in zip(self.candidates, self.advantages)
            ],
            "best_index": select_best_of_n(self),
        }


def build_candidate_group(prompt_id: str, candidates: list[Candidate]) -> CandidateGroup:
    if not candidates:
        raise EmptyGroup("cannot build an empty candidate group")
    if len(candidates) == 1:
        advantages = [0.0]
    else:
        advantages = group_advantages([c.breakdown.total for c in candidates])
    return CandidateGroup(prompt_id=prompt_id, candidates=tuple(candidates), advantages=tuple(advantages))


def select_best_of_n(group: CandidateGroup) -> int:
    """Index of the highest-total candidate; ties go to the earliest."""
    if not group.candidates:
        raise EmptyGroup("candidate group is empty")
    best = 0
    for i, candidate in enumerate(group.candidates):
        if candidate.breakdown.total > group.candidates[best].breakdown.total:
            best = i
    return best


@dataclass(frozen=True)
class ScoringContext:
    """Everything the judges need besides the candidate itself."""

    review_text: str
    comment_text: str
    evidence: str
    negatives: tuple[str, ...]
    gold: tuple[str, str] | None = None
    weights: RewardWeights = field(default_factory=lambda: DEFAULT_WEIGHTS)


def _salvage_block(text: str, name: str) -> str | None:
    try:
        block = extract_block(text, name)
    except MalformedSequence:
        return None
    if block is None or not block.strip():
        return None
    return block


def score_candidate_text(text: str, context: ScoringContext, judge_provider) -> RewardBreakdown:
    """Score one raw candidate rendering.

    Malformed candidates keep a defined reward: format is 0, blocks that a
    tolerant scan still finds are judged normally, and unrecoverable blocks
    take the scale floor without spending judge calls.
    """
    fmt = score_format(text)
    if fmt == 1:
        analysis, strategy, response = parse_target_sequence(text)
    else:
        analysis = _salvage_block(text, "analysis")
        strategy = _salvage_block(text, "strategy")
        response = _salvage_block(text, "response")

    if analysis is not None and strategy is not None:
        think = judge_reasoning(
            analysis, strategy, judge_provider, gold=context.gold, comment_text=context.comment_text
        )
    else:
        think = (FLOOR_SCORE, FLOOR_SCORE)

    if response is not None:
        resp = judge_response_quality(
            context.review_text, context.comment_text, context.evidence, response, judge_provider
        )
        div = judge_diversity(response, context.negatives, judge_provider)
    else:
        resp = FLOOR_SCORE
        div = FLOOR_SCORE
    return composite_reward(fmt, think, resp, div, context.weights)


def sample_candidate_group(
    prompt: str,
    provider,
    context: ScoringContext,
    *,
    group_size: int = DEFAULT_GROUP_SIZE,
    judge_provider=None,
    base_seed: int = 0,
) -> CandidateGroup:
    """Draw ``group_size`` candidates from one prompt and score them."""
    if group_size < 1:
        raise EmptyGroup("group_size must be >= 1")
    judge = judge_provider if judge_provider is not None else provider
    candidates: list[Candidate] = []
    for i in range(group_size):
        text = provider.complete(prompt, stage=f"candidate[{i}]", seed=base_seed + i)
        breakdown = score_candidate_text(text, context, judge)
        logger.debug("candidate %d total=%.4f format=%d", i, breakdown.total, breakdown.format)
        candidates.append(Candidate(text=text, breakdown=breakdown))
    return build_candidate_group(sha256_hex(prompt)[:16], candidates)
