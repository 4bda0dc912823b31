"""Wire schemas for the HTTP service.

Request models forbid unknown fields so client typos fail loudly. Response
models mirror the payload helpers on the core types; JSON Schema for every
model here is published under schemas/ in the repository so external
clients can pin the contract.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator

_STRICT = ConfigDict(extra="forbid")


class ManuscriptIn(BaseModel):
    model_config = _STRICT
    title: str = Field(min_length=1)
    body: str = Field(min_length=1)
    id: str | None = None


class ReviewIn(BaseModel):
    model_config = _STRICT
    text: str = Field(min_length=1)
    venue: str | None = None
    id: str | None = None


class IngestRequest(BaseModel):
    model_config = _STRICT
    manuscript: ManuscriptIn
    review: ReviewIn


class IngestResponse(BaseModel):
    manuscript_id: str
    review_id: str
    chunk_count: int


class ExtractRequest(BaseModel):
    model_config = _STRICT
    review_id: str


class TsrRequest(BaseModel):
    model_config = _STRICT
    manuscript_id: str
    review_id: str
    comment_id: str


class CandidatesRequest(BaseModel):
    model_config = _STRICT
    manuscript_id: str
    review_id: str
    comment_id: str
    group_size: int = Field(default=5, ge=1, le=64)
    base_seed: int = 0
    weights: list[float] | None = Field(
        default=None,
        description="format, think, resp, div; must sum to 1",
        min_length=4,
        max_length=4,
    )
    strategy_override: list[str] | None = Field(
        default=None,
        description="author-edited plan steps; candidates are sampled conditioned on them",
        min_length=1,
    )

    @field_validator("strategy_override")
    @classmethod
    def _steps_non_empty(cls, steps: list[str] | None) -> list[str] | None:
        if steps is not None and any(not step.strip() for step in steps):
            raise ValueError("strategy override steps must be non-empty")
        return steps


class RunAccepted(BaseModel):
    run_id: str
    kind: str
    status: str


class RunInfo(BaseModel):
    run_id: str
    kind: str
    status: str
    created_at: str
    finished_at: str | None = None
    error: str | None = None


class RunDetail(RunInfo):
    result: dict | None = None


class RunList(BaseModel):
    runs: list[RunInfo]


class ScoreRequest(BaseModel):
    model_config = _STRICT
    text: str = Field(min_length=1, description="candidate output, tagged sequence expected")
    review_text: str = Field(min_length=1)
    comment_text: str = Field(min_length=1)
    evidence_text: str | None = None
    weights: list[float] | None = Field(default=None, min_length=4, max_length=4)


class ScoreResponse(BaseModel):
    format: float
    think: float
    resp: float
    div: float
    total: float
    raw_judge_scores: dict[str, int]


class JudgeRequest(BaseModel):
    model_config = _STRICT
    review_text: str = Field(min_length=1)
    comment_text: str = Field(min_length=1)
    response_text: str = Field(min_length=1)
    evidence_text: str | None = None


class JudgeResponse(BaseModel):
    scores: dict[str, int]
    explanation: str
    overall: int | None = None


class HealthResponse(BaseModel):
    status: str
    mock: bool
    model: str


class ErrorBody(BaseModel):
    error: str
    stage: str | None = None


SCHEMA_MODELS: tuple[type[BaseModel], ...] = (
    IngestRequest,
    IngestResponse,
    ExtractRequest,
    TsrRequest,
    CandidatesRequest,
    RunAccepted,
    RunInfo,
    RunDetail,
    RunList,
    ScoreRequest,
    ScoreResponse,
    JudgeRequest,
    JudgeResponse,
    HealthResponse,
    ErrorBody,
)


def export_json_schemas(directory) -> list[str]:
    """Write one <Model>.schema.json per wire model; returns filenames."""
    import json
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for model in SCHEMA_MODELS:
        name = f"{model.__name__}.schema.json"
        path = directory / name
        path.write_text(
            json.dumps(model.model_json_schema(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        written.append(name)
    return written
