"""Review profiling and actionable-comment filtering."""

from .analyzer import (
    MAX_PARSE_ATTEMPTS,
    ReviewAnalysis,
    analyze_review,
    filter_actionable,
    is_experiment_demand,
    keyword_experiment_demand,
)

__all__ = [
    "MAX_PARSE_ATTEMPTS",
    "ReviewAnalysis",
    "analyze_review",
    "filter_actionable",
    "is_experiment_demand",
    "keyword_experiment_demand",
]
