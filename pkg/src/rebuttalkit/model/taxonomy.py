"""Closed vocabularies for reviewer profiling.

Every label used anywhere in the pipeline lives here; validation elsewhere
imports these tuples instead of re-declaring strings.
"""

from __future__ import annotations

OVERALL_STANCES: tuple[str, ...] = (
    "Accept",
    "Probably Accept",
    "Borderline",
    "Probably Reject",
    "Reject",
)

OVERALL_ATTITUDES: tuple[str, ...] = (
    "Enthusiastic",
    "Constructive",
    "Neutral",
    "Skeptical",
    "Dismissive",
)

DOMINANT_CONCERNS: tuple[str, ...] = (
    "Novelty & Significance",
    "Methodological Soundness",
    "Experimental Rigor",
    "Presentation & Clarity",
)

REVIEWER_EXPERTISE: tuple[str, ...] = (
    "Domain Expert",
    "Generalist",
    "Unfamiliar",
)

SEVERITIES: tuple[str, ...] = ("Major", "Minor")

# Per-comment categories map to their permitted sub-categories. The final
# category covers comments about the review itself rather than the work.
COMMENT_CATEGORIES: dict[str, tuple[str, ...]] = {
    "Novelty & Significance": (
        "Contribution Unclear",
        "Incremental Contribution",
        "Motivation Weak",
    ),
    "Methodological Soundness": (
        "Technical Error",
        "Unjustified Assumption",
        "Lack of Detail",
    ),
    "Experimental Rigor": (
        "Baselines Missing/Weak",
        "Insufficient Experiments",
        "Ablation/Analysis Missing",
        "Flawed Evaluation",
    ),
    "Presentation & Clarity": (
        "Writing Issues/Typos",
        "Poor Organization",
        "Figure/Table Quality",
        "Related Work Incomplete",
    ),
    "Meta-Critique & Reviewer Behavior": (
        "Unrealistic/Unconstructive Comment",
    ),
}

CONFIDENCE_MIN = 1
CONFIDENCE_MAX = 10


def confidence_in_range(value: int) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and CONFIDENCE_MIN <= value <= CONFIDENCE_MAX
