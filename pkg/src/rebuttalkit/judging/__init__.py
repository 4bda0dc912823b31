"""Response scorecards, score binning, and human-agreement statistics."""

from .agreement import (
    AgreementReport,
    AgreementStats,
    EvalSample,
    agreement_metrics,
    evaluate_agreement,
    read_eval_samples,
    render_report_table,
)
from .binning import FINE_BIN_LAYOUT, QualityTier, coarse_tier, fine_bin
from .scorecard import SCORE_DIMENSIONS, ScoreCard, judge_scorecard, scorecard_from_payload

__all__ = [
    "FINE_BIN_LAYOUT",
    "SCORE_DIMENSIONS",
    "AgreementReport",
    "AgreementStats",
    "EvalSample",
    "QualityTier",
    "ScoreCard",
    "agreement_metrics",
    "coarse_tier",
    "evaluate_agreement",
    "fine_bin",
    "judge_scorecard",
    "read_eval_samples",
    "render_report_table",
    "scorecard_from_payload",
]
