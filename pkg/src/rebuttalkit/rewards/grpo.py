"""Group-relative policy optimization arithmetic.

Pure scalar/vector math, no provider calls: group-normalized advantages,
the clipped surrogate term, and the non-negative KL estimator

    k(logp, logp_ref) = exp(d) - d - 1,  d = logp_ref - logp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import GroupTooSmall, PreconditionError

DEFAULT_EPSILON = 0.2
DEFAULT_KL_COEFF = 0.001
ADVANTAGE_STD_FLOOR = 1e-8


def group_advantages(rewards: Sequence[float]) -> list[float]:
    """Center by the group mean and scale by the population std.

    An all-equal group has no preference signal and maps to all zeros
    rather than dividing noise by the floor.
    """
    values = [float(r) for r in rewards]
    if len(values) < 2:
        raise GroupTooSmall(f"need at least 2 rewards, got {len(values)}")
    if any(not math.isfinite(v) for v in values):
        raise PreconditionError("rewards must be finite")
    # checked on the raw values: the float mean of n equal numbers is not
    # always exact, which would leak a tiny nonzero variance
    if max(values) == min(values):
        return [0.0] * len(values)
    mean = sum(values) / len(values)
    variance = sum((v - mean) ** 2 for v in values) / len(values)
    std = math.sqrt(variance)
    if std == 0.0:
        return [0.0] * len(values)
    return [(v - mean) / (std + ADVANTAGE_STD_FLOOR) for v in values]


def clipped_surrogate_term(ratio: float, advantage: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """min(ratio*A, clip(ratio, 1-eps, 1+eps)*A); never exceeds the unclipped
    term."""
    if not math.isfinite(ratio) or ratio < 0:
        raise PreconditionError(f"ratio must be finite and >= 0, got {ratio!r}")
    if not math.isfinite(advantage):
        raise PreconditionError("advantage must be finite")
    if not 0 < epsilon < 1:
        raise PreconditionError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    clipped = min(max(ratio, 1.0 - epsilon), 1.0 + epsilon)
    return min(ratio * advantage, clipped * advantage)


def kl_penalty(logp: float, logp_ref: float) -> float:
    """Low-variance KL estimate; zero iff the log-probs agree, else positive."""
    if not (math.isfinite(logp) and math.isfinite(logp_ref)):
        raise PreconditionError("log-probabilities must be finite")
    delta = logp_ref - logp
    return math.exp(delta) - delta - 1.0


@dataclass(frozen=True)
class SurrogateInput:
    """Per-candidate objective inputs; ``logp_ref`` is whichever reference
    distribution the caller is penalizing against."""

    logp: float
    logp_ref: float
    advantage: float
    epsilon: float = DEFAULT_EPSILON
    kl_coeff: float = DEFAULT_KL_COEFF

    def __post_init__(self) -> None:
        for name, value in (("logp", self.logp), ("logp_ref", self.logp_ref), ("advantage", self.advantage)):
            if not math.isfinite(value):
                raise PreconditionError(f"{name} must be finite")
        if not 0 < self.epsilon < 1:
            raise PreconditionError("epsilon must lie in (0, 1)")
        if self.kl_coeff < 0:
            raise PreconditionError("kl_coeff must be >= 0")


def objective_term(inputs: SurrogateInput) -> float:
    """Clipped surrogate minus the weighted KL penalty for one candidate."""
    ratio = math.exp(inputs.logp - inputs.logp_ref)
    surrogate = clipped_surrogate_term(ratio, inputs.advantage, inputs.epsilon)
    return surrogate - inputs.kl_coeff * kl_penalty(inputs.logp, inputs.logp_ref)
