"""Composite self-reward over format, reasoning, response and diversity.

Channels are normalized to [0, 1] and mixed by fixed weights:

    total = w_format*format + w_think*think + w_resp*resp + w_div*div

with think the mean of the two reasoning scores over 10, and resp/div the
judge scores over 10. Default weights are 0.1 / 0.3 / 0.3 / 0.3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from ..errors import OutOfRange

_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class RewardWeights:
    format: float = 0.1
    think: float = 0.3
    resp: float = 0.3
    div: float = 0.3

    def __post_init__(self) -> None:
        values = (self.format, self.think, self.resp, self.div)
        if any(w < 0 for w in values):
            raise OutOfRange("reward weights must be non-negative")
        if abs(sum(values) - 1.0) > _WEIGHT_TOL:
            raise OutOfRange(f"reward weights must sum to 1, got {sum(values)!r}")


DEFAULT_WEIGHTS = RewardWeights()


def _check_judge_score(value: float, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise OutOfRange(f"{name} must be a number, got {value!r}")
    if not 1 <= value <= 10:
        raise OutOfRange(f"{name} must lie in [1, 10], got {value!r}")
    return float(value)


@dataclass(frozen=True)
class RewardBreakdown:
    """Per-channel scores (already normalized) plus the weighted total and
    the raw judge numbers they came from."""

    format: int
    think: float
    resp: float
    div: float
    total: float
    raw_judge_scores: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.format not in (0, 1):
            raise OutOfRange(f"format must be 0 or 1, got {self.format!r}")
        for name, value in (("think", self.think), ("resp", self.resp), ("div", self.div), ("total", self.total)):
            if not 0.0 <= value <= 1.0:
                raise OutOfRange(f"{name} must lie in [0, 1], got {value!r}")
        object.__setattr__(self, "raw_judge_scores", dict(self.raw_judge_scores))

    def to_payload(self) -> dict[str, Any]:
        return {
            "format": self.format,
            "think": self.think,
            "resp": self.resp,
            "div": self.div,
            "total": self.total,
            "raw_judge_scores": dict(self.raw_judge_scores),
        }


def composite_reward(
    format_ok: int,
    think_scores: tuple[float, float],
    resp_score: float,
    div_score: float,
    weights: RewardWeights = DEFAULT_WEIGHTS,
) -> RewardBreakdown:
    """Mix the four channels into one scalar in [0, 1].

    ``think_scores`` is (analysis_score, strategy_score), each in [1, 10];
    ``resp_score`` and ``div_score`` are judge scores in [1, 10];
    ``format_ok`` is the binary parse outcome.
    """
    if format_ok not in (0, 1):
        raise OutOfRange(f"format_ok must be 0 or 1, got {format_ok!r}")
    analysis, strategy = think_scores
    analysis = _check_judge_score(analysis, "analysis_score")
    strategy = _check_judge_score(strategy, "strategy_score")
    resp = _check_judge_score(resp_score, "response_score")
    div = _check_judge_score(div_score, "diversity_score")
    think = ((analysis + strategy) / 2.0) / 10.0
    resp_norm = resp / 10.0
    div_norm = div / 10.0
    total = (
        weights.format * format_ok
        + weights.think * think
        + weights.resp * resp_norm
        + weights.div * div_norm
    )
    return RewardBreakdown(
        format=format_ok,
        think=think,
        resp=resp_norm,
        div=div_norm,
        total=total,
        raw_judge_scores={
            "analysis_score": analysis,
            "strategy_score": strategy,
            "response_score": resp,
            "diversity_score": div,
        },
    )
