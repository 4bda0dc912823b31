"""Category-balanced corpus assembly and JSONL export."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..errors import SchemaMismatch
from ..model import ManuscriptDocument, ReviewDocument, TargetSequence, TsrRecord
from ..model.sequence import parse_target_sequence
from ..tsr import NO_EVIDENCE_MARKER, render_tsr_prompt

logger = logging.getLogger(__name__)

_ROW_KEYS = {"input_prompt", "target_sequence", "category", "teacher"}


@dataclass(frozen=True)
class SftRow:
    """One supervised training row: prompt in, tagged sequence out."""

    input_prompt: str
    target_sequence: str
    category: str
    teacher: str

    def __post_init__(self) -> None:
        # the stored sequence must stay machine-checkable
        parse_target_sequence(self.target_sequence)
        if not self.input_prompt.strip():
            raise SchemaMismatch("input_prompt must be non-empty")

    def to_payload(self) -> dict[str, str]:
        return {
            "input_prompt": self.input_prompt,
            "target_sequence": self.target_sequence,
            "category": self.category,
            "teacher": self.teacher,
        }


def build_sft_row(
    record: TsrRecord,
    sequence: TargetSequence,
    review: ReviewDocument,
    manuscript: ManuscriptDocument,
    teacher_model: str,
) -> SftRow:
    """Reconstruct the drafting prompt the record answers and pair it with
    the assembled target sequence."""
    comment_analysis = record.profile.analysis_for(record.comment_id)
    chunk_map = manuscript.chunk_map()
    if record.retrieved_chunk_ids:
        evidence = "\n\n".join(
            f"[{cid}] {chunk_map[cid].text}" for cid in record.retrieved_chunk_ids
        )
    else:
        evidence = NO_EVIDENCE_MARKER
    # the comment text travels inside the sequence's analysis block
    texts = _comment_texts_from_analysis(sequence.analysis)
    comment = texts.get(record.comment_id)
    if not comment:
        raise SchemaMismatch(
            f"sequence analysis block carries no text for comment {record.comment_id!r}"
        )
    prompt = render_tsr_prompt(review.raw_text, comment, evidence)
    return SftRow(
        input_prompt=prompt,
        target_sequence=sequence.rendered,
        category=comment_analysis.category,
        teacher=teacher_model,
    )


def _comment_texts_from_analysis(analysis_block: str) -> dict[str, str | None]:
    from ..model.profile import profile_from_payload

    _, texts = profile_from_payload(analysis_block)
    return texts


@dataclass(frozen=True)
class QuotaReport:
    """What the balancing pass kept, per category, and which quotas fell short."""

    kept: Mapping[str, int]
    available: Mapping[str, int]
    shortfalls: Mapping[str, int] = field(default_factory=dict)

    def to_payload(self) -> dict[str, object]:
        return {
            "kept": dict(self.kept),
            "available": dict(self.available),
            "shortfalls": dict(self.shortfalls),
        }


@dataclass(frozen=True)
class SynthesisJob:
    """Balancing policy for one export: per-category quotas plus an optional
    uniform surplus draw."""

    category_quotas: Mapping[str, int]
    random_extra: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        for cat, n in self.category_quotas.items():
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise SchemaMismatch(f"quota for {cat!r} must be a non-negative int")
        if self.random_extra < 0:
            raise SchemaMismatch("random_extra must be non-negative")


def balance_rows(rows: Sequence[SftRow], job: SynthesisJob) -> tuple[list[SftRow], QuotaReport]:
    """Draw up to the quota from each category (seeded, reproducible), then
    top up with a uniform draw from the leftovers."""
    rng = random.Random(job.seed)
    by_category: dict[str, list[SftRow]] = {}
    for row in rows:
        by_category.setdefault(row.category, []).append(row)

    kept: list[SftRow] = []
    kept_counts: dict[str, int] = {}
    shortfalls: dict[str, int] = {}
    chosen_ids: set[int] = set()
    for category in sorted(job.category_quotas):
        quota = job.category_quotas[category]
        pool = by_category.get(category, [])
        take = min(quota, len(pool))
        if take < quota:
            shortfalls[category] = quota - take
            logger.warning(
                "category %r has %d rows, quota %d; short by %d",
                category, len(pool), quota, quota - take,
            )
        picked = rng.sample(pool, take) if take else []
        kept.extend(picked)
        kept_counts[category] = take
        chosen_ids.update(id(r) for r in picked)

    if job.random_extra:
        leftovers = [r for r in rows if id(r) not in chosen_ids]
        extra = rng.sample(leftovers, min(job.random_extra, len(leftovers)))
        for row in extra:
            kept.append(row)
            kept_counts[row.category] = kept_counts.get(row.category, 0) + 1

    report = QuotaReport(
        kept=kept_counts,
        available={cat: len(pool) for cat, pool in sorted(by_category.items())},
        shortfalls=shortfalls,
    )
    return kept, report


def export_jsonl(rows: Iterable[SftRow], path: str | Path) -> int:
    """Write rows as JSONL; returns the row count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row.to_payload(), ensure_ascii=False) + "\n")
            n += 1
    return n


def balance_and_export(
    rows: Sequence[SftRow], job: SynthesisJob, path: str | Path
) -> QuotaReport:
    kept, report = balance_rows(rows, job)
    export_jsonl(kept, path)
    return report


def load_sft_corpus(path: str | Path) -> list[SftRow]:
    """Read an exported corpus back; every row is re-validated."""
    rows: list[SftRow] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaMismatch(f"line {line_no}: invalid JSON: {exc}") from exc
            if not isinstance(payload, dict) or set(payload) != _ROW_KEYS:
                raise SchemaMismatch(
                    f"line {line_no}: expected keys {sorted(_ROW_KEYS)}"
                )
            rows.append(SftRow(**payload))
    if not rows:
        raise SchemaMismatch(f"{path}: corpus is empty")
    return rows
