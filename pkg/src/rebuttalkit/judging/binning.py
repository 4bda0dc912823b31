"""Score tiers and bins over the 0-10 judge scale."""

from __future__ import annotations

from enum import Enum

from ..errors import OutOfRange


class QualityTier(str, Enum):
    UNCONVINCING = "Unconvincing"
    ACCEPTABLE = "Acceptable"
    GOOD = "Good"
    EXCELLENT = "Excellent"


# Fine bins refine the coarse tiers: every bin sits inside one tier, so
# fine-equal always implies coarse-equal. Exactly 7 bins, indices 0..6.
FINE_BIN_LAYOUT: tuple[tuple[int, ...], ...] = (
    (0,),
    (1, 2, 3),
    (4,),
    (5,),
    (6,),
    (7, 8),
    (9, 10),
)

_FINE_INDEX: dict[int, int] = {
    score: idx for idx, bucket in enumerate(FINE_BIN_LAYOUT) for score in bucket
}


def _check_score(score: int) -> int:
    if isinstance(score, bool) or not isinstance(score, int):
        raise OutOfRange(f"score must be an integer, got {score!r}")
    if not 0 <= score <= 10:
        raise OutOfRange(f"score must lie in [0, 10], got {score}")
    return score


def coarse_tier(score: int) -> QualityTier:
    """0-3 Unconvincing, 4-6 Acceptable, 7-8 Good, 9-10 Excellent."""
    score = _check_score(score)
    if score <= 3:
        return QualityTier.UNCONVINCING
    if score <= 6:
        return QualityTier.ACCEPTABLE
    if score <= 8:
        return QualityTier.GOOD
    return QualityTier.EXCELLENT


def fine_bin(score: int) -> int:
    """Index of the score's fine bin (0..6)."""
    return _FINE_INDEX[_check_score(score)]
