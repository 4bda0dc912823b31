"""HTTP service around the drafting pipeline.

Document ingest, scoring, and judging answer synchronously. Extraction,
drafting, and candidate sampling run as background jobs: the endpoint
returns 202 with a run id, progress streams over SSE, and the result is
fetched from the run record. Documents live in process memory; run records
persist under the configured data directory.
"""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from ..appconfig import AppConfig, Runtime, build_runtime, load_config
from ..errors import (
    DuplicateRun,
    ExtractionParseError,
    JudgeParseError,
    MissingRun,
    ProviderError,
    RebuttalError,
    StageError,
)
from ..judging import judge_scorecard
from ..model import ReviewDocument
from ..model.profile import profile_to_payload
from ..retrieval import build_manuscript
from ..rewards import (
    RewardWeights,
    ScoringContext,
    negative_samples,
    sample_candidate_group,
    score_candidate_text,
)
from ..tsr import NO_EVIDENCE_MARKER, TsrEngine, apply_strategy_override, render_tsr_prompt
from ..util import sha256_hex
from .events import EventBus, format_sse
from .runs import RunStore
from . import schemas as S

logger = logging.getLogger(__name__)

_UPSTREAM_ERRORS = (ProviderError, JudgeParseError, ExtractionParseError)


def _weights_from(values: list[float] | None, fallback: RewardWeights) -> RewardWeights:
    if values is None:
        return fallback
    f, t, r, d = values
    return RewardWeights(format=f, think=t, resp=r, div=d)


class DocumentRegistry:
    """In-memory store of ingested manuscripts and reviews."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.manuscripts: dict[str, object] = {}
        self.reviews: dict[str, ReviewDocument] = {}

    def put(self, manuscript, review: ReviewDocument) -> None:
        with self._lock:
            self.manuscripts[manuscript.id] = manuscript
            self.reviews[review.id] = review

    def manuscript(self, manuscript_id: str):
        with self._lock:
            doc = self.manuscripts.get(manuscript_id)
        if doc is None:
            raise MissingRun(f"no manuscript named {manuscript_id!r}; ingest it first")
        return doc

    def review(self, review_id: str) -> ReviewDocument:
        with self._lock:
            doc = self.reviews.get(review_id)
        if doc is None:
            raise MissingRun(f"no review named {review_id!r}; ingest it first")
        return doc


def create_app(config: AppConfig | None = None, runtime: Runtime | None = None) -> FastAPI:
    config = config or load_config()
    runtime = runtime or build_runtime(config)

    store = RunStore(config.data_dir)
    bus = EventBus(store)
    registry = DocumentRegistry()
    engine = TsrEngine(runtime.chat, runtime.embedder, k=config.k)
    executor = ThreadPoolExecutor(max_workers=4, thread_name_prefix="run")

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        executor.shutdown(wait=False, cancel_futures=True)

    app = FastAPI(title="rebuttalkit", version="0.1.0", lifespan=lifespan)
    # single-user local tool: the browser workspace is served from its own
    # port, so cross-origin calls are expected; no credentials are involved
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"], allow_headers=["*"]
    )

    # ---- error mapping -------------------------------------------------

    @app.exception_handler(RequestValidationError)
    async def _validation(_: Request, exc: RequestValidationError) -> JSONResponse:
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        detail = f"{where}: {first.get('msg', 'invalid request')}" if where else "invalid request"
        return JSONResponse(status_code=400, content={"error": detail, "stage": None})

    @app.exception_handler(MissingRun)
    async def _missing(_: Request, exc: MissingRun) -> JSONResponse:
        return JSONResponse(status_code=404, content={"error": str(exc), "stage": None})

    @app.exception_handler(DuplicateRun)
    async def _duplicate(_: Request, exc: DuplicateRun) -> JSONResponse:
        return JSONResponse(status_code=409, content={"error": str(exc), "stage": None})

    @app.exception_handler(RebuttalError)
    async def _domain(_: Request, exc: RebuttalError) -> JSONResponse:
        stage = None
        cause: BaseException = exc
        if isinstance(exc, StageError):
            stage = exc.stage
            cause = exc.cause if exc.cause is not None else exc
        status = 502 if isinstance(cause, _UPSTREAM_ERRORS) else 400
        return JSONResponse(status_code=status, content={"error": str(exc), "stage": stage})

    # ---- background job plumbing ---------------------------------------

    def launch(kind: str, request_payload: dict, work: Callable[[str], dict]) -> S.RunAccepted:
        meta = store.create(kind, request_payload)
        bus.publish(meta.run_id, "queued", kind=kind)

        def job() -> None:
            store.mark_running(meta.run_id)
            bus.publish(meta.run_id, "running")
            try:
                result = work(meta.run_id)
            except Exception as exc:  # noqa: BLE001  # job thread must not die silently
                logger.exception("run %s failed", meta.run_id)
                store.fail(meta.run_id, f"{type(exc).__name__}: {exc}")
                bus.publish(meta.run_id, "failed", error=f"{type(exc).__name__}: {exc}")

            else:
                store.finish(meta.run_id, result)
                bus.publish(meta.run_id, "completed")

        executor.submit(job)
        return S.RunAccepted(run_id=meta.run_id, kind=kind, status="queued")

    # ---- endpoints ------------------------------------------------------

    @app.get("/api/health", response_model=S.HealthResponse)
    def health() -> S.HealthResponse:
        return S.HealthResponse(status="ok", mock=config.use_mock, model=config.model)

    @app.post("/api/reviews", response_model=S.IngestResponse)
    def ingest(body: S.IngestRequest) -> S.IngestResponse:
        m_id = body.manuscript.id or f"m-{sha256_hex(body.manuscript.body)[:12]}"
        manuscript = build_manuscript(m_id, body.manuscript.title, body.manuscript.body)
        r_id = body.review.id or f"r-{sha256_hex(body.review.text)[:12]}"
        review = ReviewDocument(
            id=r_id, manuscript_id=m_id, raw_text=body.review.text, venue=body.review.venue
        )
        registry.put(manuscript, review)
        return S.IngestResponse(
            manuscript_id=m_id, review_id=r_id, chunk_count=len(manuscript.chunks)
        )

    @app.post("/api/extract", response_model=S.RunAccepted, status_code=202)
    def extract(body: S.ExtractRequest) -> S.RunAccepted:
        review = registry.review(body.review_id)

        def work(run_id: str) -> dict:
            bus.publish(run_id, "stage", stage="analysis", status="started")
            analysis, cached = engine.analyze(review)
            bus.publish(
                run_id, "stage", stage="analysis",
                status="finished", detail="cached" if cached else None,
            )
            texts = {c.id: c.text for c in analysis.comments}
            return {
                "review_id": review.id,
                "profile": profile_to_payload(analysis.profile, comment_texts=texts),
                "comments": [
                    {"id": c.id, "ordinal": c.ordinal, "text": c.text, "distilled": c.distilled}
                    for c in analysis.comments
                ],
            }

        return launch("extract", body.model_dump(), work)

    @app.post("/api/tsr", response_model=S.RunAccepted, status_code=202)
    def tsr(body: S.TsrRequest) -> S.RunAccepted:
        manuscript = registry.manuscript(body.manuscript_id)
        review = registry.review(body.review_id)

        def work(run_id: str) -> dict:
            record = engine.run_tsr(
                manuscript,
                review,
                body.comment_id,
                on_stage=lambda stage, status: bus.publish(
                    run_id, "stage", stage=stage, status=status
                ),
            )
            return record.to_payload()

        return launch("tsr", body.model_dump(), work)

    @app.post("/api/candidates", response_model=S.RunAccepted, status_code=202)
    def candidates(body: S.CandidatesRequest) -> S.RunAccepted:
        manuscript = registry.manuscript(body.manuscript_id)
        review = registry.review(body.review_id)
        weights = _weights_from(body.weights, config.reward_weights())

        def work(run_id: str) -> dict:
            bus.publish(run_id, "stage", stage="evidence", status="started")
            comment, evidence = engine.evidence_for(manuscript, review, body.comment_id)
            bus.publish(run_id, "stage", stage="evidence", status="finished")
            prompt = render_tsr_prompt(review.raw_text, comment.text, evidence)
            if body.strategy_override is not None:
                prompt = apply_strategy_override(prompt, body.strategy_override)
            context = ScoringContext(
                review_text=review.raw_text,
                comment_text=comment.text,
                evidence=evidence,
                negatives=negative_samples(),
                weights=weights,
            )
            bus.publish(run_id, "stage", stage="sampling", status="started")
            group = sample_candidate_group(
                prompt,
                runtime.chat,
                context,
                group_size=body.group_size,
                judge_provider=runtime.chat,
                base_seed=body.base_seed,
            )
            bus.publish(run_id, "stage", stage="sampling", status="finished")
            payload = group.to_payload()
            payload["comment_id"] = comment.id
            payload["weights"] = [weights.format, weights.think, weights.resp, weights.div]
            return payload

        return launch("candidates", body.model_dump(), work)

    @app.post("/api/score", response_model=S.ScoreResponse)
    def score(body: S.ScoreRequest) -> S.ScoreResponse:
        context = ScoringContext(
            review_text=body.review_text,
            comment_text=body.comment_text,
            evidence=body.evidence_text or NO_EVIDENCE_MARKER,
            negatives=negative_samples(),
            weights=_weights_from(body.weights, config.reward_weights()),
        )
        breakdown = score_candidate_text(body.text, context, runtime.chat)
        return S.ScoreResponse(**breakdown.to_payload())

    @app.post("/api/judge", response_model=S.JudgeResponse)
    def judge(body: S.JudgeRequest) -> S.JudgeResponse:
        card = judge_scorecard(
            body.review_text,
            body.comment_text,
            body.evidence_text or NO_EVIDENCE_MARKER,
            body.response_text,
            runtime.chat,
        )
        return S.JudgeResponse(
            scores=card.dimension_scores(), explanation=card.explanation, overall=card.overall
        )

    @app.get("/api/runs", response_model=S.RunList)
    def list_runs() -> S.RunList:
        return S.RunList(
            runs=[S.RunInfo(**{k: v for k, v in m.to_payload().items() if k != "request"})
                  for m in store.list()]
        )

    @app.get("/api/runs/{run_id}", response_model=S.RunDetail)
    def run_detail(run_id: str) -> S.RunDetail:
        meta = store.get(run_id)
        info = {k: v for k, v in meta.to_payload().items() if k != "request"}
        return S.RunDetail(**info, result=store.result(run_id))

    @app.get("/api/runs/{run_id}/events")
    def run_events(run_id: str) -> StreamingResponse:
        store.get(run_id)  # 404 before the stream starts

        def gen():
            for record in bus.stream(run_id):
                yield format_sse(record)

        return StreamingResponse(gen(), media_type="text/event-stream")

    return app
