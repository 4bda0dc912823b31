"""Turn an aligned (comment, author reply) pair into a training record."""

from __future__ import annotations

import logging

from ..errors import PreconditionError
from ..extraction import ReviewAnalysis, is_experiment_demand
from ..model import (
    ManuscriptDocument,
    ReviewDocument,
    ReviewerProfile,
    TargetSequence,
    TsrRecord,
    assemble_target_sequence,
)
from ..model.profile import profile_json
from ..tsr import SynthesisPair, TsrEngine

logger = logging.getLogger(__name__)


def focused_profile_json(profile: ReviewerProfile, comment_id: str, comment_text: str) -> str:
    """Profile JSON narrowed to the one comment the sequence is about."""
    focused = ReviewerProfile(
        macro=profile.macro,
        per_comment=(profile.analysis_for(comment_id),),
    )
    return profile_json(focused, comment_texts={comment_id: comment_text})


def synthesize_record(
    pair: SynthesisPair,
    analysis: ReviewAnalysis,
    manuscript: ManuscriptDocument,
    review: ReviewDocument,
    engine: TsrEngine,
) -> tuple[TsrRecord, TargetSequence]:
    """Run the full pipeline for one aligned pair, refining the human reply,
    and assemble the tagged training sequence.

    Rejects comments that demand new experiments: those cannot be answered
    from the manuscript alone, so no faithful target exists for them.
    """
    comment = analysis.comment(pair.comment_id)
    if comment is None:
        raise PreconditionError(f"unknown comment id {pair.comment_id!r}")
    if is_experiment_demand(comment.text, engine.chat):
        raise PreconditionError(
            f"comment {pair.comment_id} demands new experiments; no synthesizable target"
        )
    record = engine.run_tsr(
        manuscript,
        review,
        pair.comment_id,
        original_response=pair.original_response,
    )
    sequence = assemble_target_sequence(
        analysis=focused_profile_json(record.profile, pair.comment_id, comment.text),
        strategy=record.strategy.numbered(),
        response=record.response.text,
    )
    logger.info("synthesized record for %s", pair.comment_id)
    return record, sequence
