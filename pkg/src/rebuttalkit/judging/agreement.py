"""Human-judge agreement statistics.

Correlations whose denominator is zero (constant inputs, n < 2) are
reported as None, never as 0: silently coerced zeros corrupt averages and
fake disagreement where the statistic simply does not exist.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from scipy import stats as _scipy_stats

from ..errors import DegenerateInput, LengthMismatch, OutOfRange, SchemaMismatch
from .binning import FINE_BIN_LAYOUT, coarse_tier, fine_bin
from .scorecard import SCORE_DIMENSIONS, ScoreCard, judge_scorecard

logger = logging.getLogger(__name__)


def _validated(scores: Sequence[int], name: str) -> list[int]:
    out = []
    for s in scores:
        if isinstance(s, bool) or not isinstance(s, int):
            raise OutOfRange(f"{name} scores must be integers, got {s!r}")
        if not 0 <= s <= 10:
            raise OutOfRange(f"{name} scores must lie in [0, 10], got {s}")
        out.append(s)
    return out


def _pearson(x: Sequence[float], y: Sequence[float]) -> float:
    if len(x) < 2 or len(set(x)) == 1 or len(set(y)) == 1:
        raise DegenerateInput("pearson undefined for constant or single-point input")
    return float(_scipy_stats.pearsonr(x, y).statistic)


def _spearman(x: Sequence[float], y: Sequence[float]) -> float:
    if len(x) < 2 or len(set(x)) == 1 or len(set(y)) == 1:
        raise DegenerateInput("spearman undefined for constant or single-point input")
    return float(_scipy_stats.spearmanr(x, y).statistic)


def _kendall(x: Sequence[float], y: Sequence[float]) -> float:
    # tau-b's denominator vanishes exactly when one side is fully tied
    if len(x) < 2 or len(set(x)) == 1 or len(set(y)) == 1:
        raise DegenerateInput("kendall tau-b undefined for constant or single-point input")
    return float(_scipy_stats.kendalltau(x, y, variant="b").statistic)


@dataclass(frozen=True)
class AgreementStats:
    """Agreement between one human score list and one model score list."""

    n: int
    mae: float
    pearson: float | None
    spearman: float | None
    kendall: float | None
    coarse_accuracy: float
    fine_accuracy: float

    def to_payload(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "mae": self.mae,
            "pearson": self.pearson,
            "spearman": self.spearman,
            "kendall": self.kendall,
            "coarse_accuracy": self.coarse_accuracy,
            "fine_accuracy": self.fine_accuracy,
        }


def agreement_metrics(human: Sequence[int], model: Sequence[int]) -> AgreementStats:
    """MAE, three rank/linear correlations, and tier/bin accuracies."""
    if len(human) != len(model) or not human:
        raise LengthMismatch(f"need equal non-empty score lists, got {len(human)} and {len(model)}")
    h = _validated(human, "human")
    m = _validated(model, "model")
    n = len(h)
    mae = sum(abs(a - b) for a, b in zip(h, m)) / n

    def guarded(fn) -> float | None:
        try:
            value = fn(h, m)
        except DegenerateInput as exc:
            logger.info("correlation undefined: %s", exc)
            return None
        return None if math.isnan(value) else value

    coarse = sum(1 for a, b in zip(h, m) if coarse_tier(a) == coarse_tier(b)) / n
    fine = sum(1 for a, b in zip(h, m) if fine_bin(a) == fine_bin(b)) / n
    return AgreementStats(
        n=n,
        mae=mae,
        pearson=guarded(_pearson),
        spearman=guarded(_spearman),
        kendall=guarded(_kendall),
        coarse_accuracy=coarse,
        fine_accuracy=fine,
    )


@dataclass(frozen=True)
class EvalSample:
    """One harness item: the context, the response, and human scores."""

    review_text: str
    comment_text: str
    evidence: str
    response_text: str
    human_scores: Mapping[str, int]

    def __post_init__(self) -> None:
        missing = [d for d in SCORE_DIMENSIONS if d not in self.human_scores]
        if missing:
            raise SchemaMismatch(f"human_scores missing dimensions: {missing}")
        object.__setattr__(self, "human_scores", dict(self.human_scores))


def read_eval_samples(path: str | Path) -> list[EvalSample]:
    """Load harness samples from JSONL."""
    samples = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaMismatch(f"{path}:{line_no}: invalid JSON: {exc}") from exc
        try:
            samples.append(
                EvalSample(
                    review_text=row["review_text"],
                    comment_text=row["comment_text"],
                    evidence=row.get("evidence", ""),
                    response_text=row["response_text"],
                    human_scores=row["human_scores"],
                )
            )
        except KeyError as exc:
            raise SchemaMismatch(f"{path}:{line_no}: missing field {exc}") from exc
    if not samples:
        raise SchemaMismatch(f"{path} holds no samples")
    return samples


@dataclass(frozen=True)
class AgreementReport:
    dimensions: Mapping[str, AgreementStats]
    n: int
    notes: tuple[str, ...] = ()

    def to_payload(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "dimensions": {d: s.to_payload() for d, s in self.dimensions.items()},
            "fine_bins": [list(b) for b in FINE_BIN_LAYOUT],
            "notes": list(self.notes),
        }


def evaluate_agreement(samples: Sequence[EvalSample], provider) -> AgreementReport:
    """Run the scorecard judge over every sample and compare to the humans."""
    if not samples:
        raise LengthMismatch("no samples to evaluate")
    cards: list[ScoreCard] = []
    for sample in samples:
        cards.append(
            judge_scorecard(
                sample.review_text,
                sample.comment_text,
                sample.evidence,
                sample.response_text,
                provider,
            )
        )
    dimensions: dict[str, AgreementStats] = {}
    for dim in SCORE_DIMENSIONS:
        human = [int(s.human_scores[dim]) for s in samples]
        model = [card.dimension_scores()[dim] for card in cards]
        dimensions[dim] = agreement_metrics(human, model)
    notes = ("fine bin layout reserves a dedicated bin for score 0",)
    return AgreementReport(dimensions=dimensions, n=len(samples), notes=notes)


def _fmt(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def render_report_table(report: AgreementReport) -> str:
    """Fixed-width table; undefined correlations print as n/a and are
    excluded from the average row."""
    header = f"{'dimension':<18} {'n':>4} {'mae':>7} {'pearson':>8} {'spearman':>9} {'kendall':>8} {'coarse':>7} {'fine':>7}"
    lines = [header, "-" * len(header)]
    for dim, s in report.dimensions.items():
        lines.append(
            f"{dim:<18} {s.n:>4} {s.mae:>7.3f} {_fmt(s.pearson):>8} {_fmt(s.spearman):>9} "
            f"{_fmt(s.kendall):>8} {s.coarse_accuracy:>7.3f} {s.fine_accuracy:>7.3f}"
        )

    def avg(values: list[float | None]) -> str:
        defined = [v for v in values if v is not None]
        return _fmt(sum(defined) / len(defined)) if defined else "n/a"

    stats = list(report.dimensions.values())
    lines.append("-" * len(header))
    lines.append(
        f"{'average':<18} {report.n:>4} {avg([s.mae for s in stats]):>7} {avg([s.pearson for s in stats]):>8} "
        f"{avg([s.spearman for s in stats]):>9} {avg([s.kendall for s in stats]):>8} "
        f"{avg([s.coarse_accuracy for s in stats]):>7} {avg([s.fine_accuracy for s in stats]):>7}"
    )
    return "\n".join(lines)
