import pytest

from rebuttalkit.errors import OutOfRange, PreconditionError, SchemaMismatch, UnknownCategory
from rebuttalkit.model import (
    Comment,
    MacroProfile,
    ManuscriptChunk,
    ManuscriptDocument,
    MicroAnalysis,
    RebuttalResponse,
    ReviewerProfile,
    Strategy,
    TraceEvent,
    TsrRecord,
)


def micro(comment_id: str = "c1") -> MicroAnalysis:
    return MicroAnalysis(
        comment_id=comment_id,
        category="Experimental Rigor",
        sub_category="Baselines Missing/Weak",
        severity="Major",
        confidence=9,
    )


def macro() -> MacroProfile:
    return MacroProfile(
        overall_stance="Borderline",
        overall_attitude="Constructive",
        dominant_concern="Experimental Rigor",
        reviewer_expertise="Generalist",
        confidence=7,
    )


def test_chunk_embedding_is_coerced_to_float_tuple():
    chunk = ManuscriptChunk(id="p0", ordinal=0, text="body", embedding=[1, 2, 3])
    assert chunk.embedding == (1.0, 2.0, 3.0)
    assert all(isinstance(v, float) for v in chunk.embedding)


def test_chunk_rejects_non_finite_embedding():
    with pytest.raises(PreconditionError):
        ManuscriptChunk(id="p0", ordinal=0, text="body", embedding=[1.0, float("nan")])


def test_manuscript_requires_contiguous_ordinals():
    c0 = ManuscriptChunk(id="a", ordinal=0, text="x")
    c2 = ManuscriptChunk(id="b", ordinal=2, text="y")
    with pytest.raises(PreconditionError):
        ManuscriptDocument(id="m", title="t", body="x\n\ny", chunks=(c0, c2))


def test_manuscript_rejects_duplicate_chunk_ids():
    c0 = ManuscriptChunk(id="a", ordinal=0, text="x")
    c1 = ManuscriptChunk(id="a", ordinal=1, text="y")
    with pytest.raises(PreconditionError):
        ManuscriptDocument(id="m", title="t", body="x\n\ny", chunks=(c0, c1))


def test_chunk_map(manuscript):
    cmap = manuscript.chunk_map()
    assert set(cmap) == {c.id for c in manuscript.chunks}
    for cid, chunk in cmap.items():
        assert chunk.id == cid


def test_macro_profile_validates_labels():
    with pytest.raises(UnknownCategory):
        MacroProfile(
            overall_stance="Maybe",
            overall_attitude="Constructive",
            dominant_concern="Experimental Rigor",
            reviewer_expertise="Generalist",
            confidence=7,
        )
    with pytest.raises(OutOfRange):
        MacroProfile(
            overall_stance="Borderline",
            overall_attitude="Constructive",
            dominant_concern="Experimental Rigor",
            reviewer_expertise="Generalist",
            confidence=0,
        )


def test_micro_analysis_category_pair_checked():
    with pytest.raises(UnknownCategory):
        MicroAnalysis(
            comment_id="c1",
            category="Novelty & Significance",
            sub_category="Baselines Missing/Weak",
            severity="Major",
            confidence=5,
        )


def test_reviewer_profile_rejects_duplicate_comment_ids():
    with pytest.raises(SchemaMismatch):
        ReviewerProfile(macro=macro(), per_comment=(micro("c1"), micro("c1")))


def test_analysis_for_lookup():
    profile = ReviewerProfile(macro=macro(), per_comment=(micro("c1"), micro("c2")))
    assert profile.analysis_for("c2").comment_id == "c2"
    assert profile.analysis_for("missing") is None


def test_strategy_strips_and_numbers_steps():
    strategy = Strategy(steps=("  acknowledge  ", "cite the table"))
    assert strategy.steps == ("acknowledge", "cite the table")
    assert strategy.numbered() == "1. acknowledge\n2. cite the table"


def test_strategy_rejects_empty_steps():
    with pytest.raises(PreconditionError):
        Strategy(steps=())
    with pytest.raises(PreconditionError):
        Strategy(steps=("ok", "   "))


def test_rebuttal_response_must_be_non_empty():
    with pytest.raises(PreconditionError):
        RebuttalResponse("   ")


def test_trace_event_payload_round_trip():
    event = TraceEvent(stage="analysis", model_id="m", timestamp="2026-01-01T00:00:00Z", detail="cached")
    assert TraceEvent.from_payload(event.to_payload()) == event


def _record(trace_stages):
    profile = ReviewerProfile(macro=macro(), per_comment=(micro("c1"),))
    trace = tuple(
        TraceEvent(stage=s, model_id="m", timestamp=f"2026-01-01T00:00:0{i}Z")
        for i, s in enumerate(trace_stages)
    )
    return TsrRecord(
        manuscript_id="m1",
        review_id="r1",
        comment_id="c1",
        profile=profile,
        strategy=Strategy(steps=("step",)),
        response=RebuttalResponse("reply"),
        retrieved_chunk_ids=("p0",),
        provider_trace=trace,
    )


def test_record_accepts_pipeline_order_and_repeats():
    _record(["analysis", "retrieval", "strategy", "response"])
    # retried stages appear as consecutive repeats and stay legal
    _record(["analysis", "analysis", "retrieval", "strategy", "response"])


def test_record_rejects_out_of_order_trace():
    with pytest.raises(PreconditionError):
        _record(["retrieval", "analysis", "strategy", "response"])


def test_record_requires_comment_in_profile():
    profile = ReviewerProfile(macro=macro(), per_comment=(micro("c1"),))
    with pytest.raises(PreconditionError):
        TsrRecord(
            manuscript_id="m1",
            review_id="r1",
            comment_id="other",
            profile=profile,
            strategy=Strategy(steps=("step",)),
            response=RebuttalResponse("reply"),
            retrieved_chunk_ids=(),
            provider_trace=(),
        )


def test_record_payload_round_trip():
    record = _record(["analysis", "retrieval", "strategy", "response"])
    assert TsrRecord.from_payload(record.to_payload()) == record
