"""Self-reward channels, composite mixing, GRPO math and candidate groups."""

from .candidates import (
    DEFAULT_GROUP_SIZE,
    Candidate,
    CandidateGroup,
    ScoringContext,
    build_candidate_group,
    sample_candidate_group,
    score_candidate_text,
    select_best_of_n,
)
from .composite import DEFAULT_WEIGHTS, RewardBreakdown, RewardWeights, composite_reward
from .grpo import (
    DEFAULT_EPSILON,
    DEFAULT_KL_COEFF,
    SurrogateInput,
    clipped_surrogate_term,
    group_advantages,
    kl_penalty,
    objective_term,
)
from .judges import (
    judge_diversity,
    judge_reasoning,
    judge_response_quality,
    negative_samples,
    score_format,
)

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_GROUP_SIZE",
    "DEFAULT_KL_COEFF",
    "DEFAULT_WEIGHTS",
    "Candidate",
    "CandidateGroup",
    "RewardBreakdown",
    "RewardWeights",
    "ScoringContext",
    "SurrogateInput",
    "build_candidate_group",
    "clipped_surrogate_term",
    "composite_reward",
    "group_advantages",
    "judge_diversity",
    "judge_reasoning",
    "judge_response_quality",
    "kl_penalty",
    "negative_samples",
    "objective_term",
    "sample_candidate_group",
    "score_candidate_text",
    "score_format",
    "select_best_of_n",
]
