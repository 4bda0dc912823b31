"""HTTP service: published wire schemas, sync endpoints, background runs
with SSE progress, durable run records, and the event bus."""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from conftest import FOUR_COMMENT_REVIEW, MANUSCRIPT_BODY

from rebuttalkit.appconfig import AppConfig, build_runtime
from rebuttalkit.errors import DuplicateRun, MissingRun
from rebuttalkit.model.sequence import assemble_target_sequence
from rebuttalkit.retrieval import build_manuscript
from rebuttalkit.service import EventBus, RunStore, create_app, format_sse
from rebuttalkit.service import schemas as S
from rebuttalkit.util import sha256_hex

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"

WELL_FORMED = assemble_target_sequence(
    '{"note": "analysis body"}',
    "1. Acknowledge.\n2. Cite the ablation table.\n3. Promise a revision.",
    "We thank the reviewer and point to the ablation table.",
).rendered


def make_client(tmp_path) -> TestClient:
    config = AppConfig(mock=True, data_dir=str(tmp_path / "runs"))
    return TestClient(create_app(config, build_runtime(config)))


@pytest.fixture()
def client(tmp_path):
    with make_client(tmp_path) as c:
        yield c


def ingest(client: TestClient) -> tuple[str, str]:
    resp = client.post(
        "/api/reviews",
        json={
            "manuscript": {"title": "Momentum Queues", "body": MANUSCRIPT_BODY},
            "review": {"text": FOUR_COMMENT_REVIEW},
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    return body["manuscript_id"], body["review_id"]


def wait_run(client: TestClient, run_id: str, timeout_s: float = 30.0) -> dict:
    deadline = time.monotonic() + timeout_s
    while time.monotonic() < deadline:
        resp = client.get(f"/api/runs/{run_id}")
        assert resp.status_code == 200
        body = resp.json()
        if body["status"] in ("completed", "failed"):
            return body
        time.sleep(0.02)
    pytest.fail(f"run {run_id} still {body['status']} after {timeout_s}s")


def sse_events(text: str) -> list[dict]:
    events = []
    for frame in text.split("\n\n"):
        if not frame.strip():
            continue
        lines = frame.splitlines()
        assert lines[0].startswith("event: ")
        assert lines[1].startswith("data: ")
        record = json.loads(lines[1][len("data: "):])
        assert record["event"] == lines[0][len("event: "):]
        events.append(record)
    return events


# ---- published schema contract ------------------------------------------


def test_schema_model_set_is_complete() -> None:
    published = sorted(p.name for p in SCHEMA_DIR.glob("*.schema.json"))
    expected = sorted(f"{m.__name__}.schema.json" for m in S.SCHEMA_MODELS)
    assert published == expected
    assert len(S.SCHEMA_MODELS) == 15


@pytest.mark.parametrize("model", S.SCHEMA_MODELS, ids=lambda m: m.__name__)
def test_published_schema_matches_model_export(model) -> None:
    path = SCHEMA_DIR / f"{model.__name__}.schema.json"
    expected = json.dumps(model.model_json_schema(), indent=2, sort_keys=True) + "\n"
    assert path.read_text(encoding="utf-8") == expected


def test_export_json_schemas_reproduces_published_files(tmp_path) -> None:
    written = S.export_json_schemas(tmp_path)
    assert sorted(written) == sorted(p.name for p in SCHEMA_DIR.glob("*.schema.json"))
    for name in written:
        fresh = (tmp_path / name).read_text(encoding="utf-8")
        assert fresh == (SCHEMA_DIR / name).read_text(encoding="utf-8")


# ---- health and ingest ----------------------------------------------------


def test_health_reports_mock_runtime(client) -> None:
    resp = client.get("/api/health")
    assert resp.status_code == 200
    body = resp.json()
    S.HealthResponse.model_validate(body)
    assert body == {"status": "ok", "mock": True, "model": "teacher-chat"}


def test_ingest_derives_content_addressed_ids(client) -> None:
    m_id, r_id = ingest(client)
    assert m_id == f"m-{sha256_hex(MANUSCRIPT_BODY)[:12]}"
    assert r_id == f"r-{sha256_hex(FOUR_COMMENT_REVIEW)[:12]}"


def test_ingest_respects_explicit_ids_and_counts_chunks(client) -> None:
    resp = client.post(
        "/api/reviews",
        json={
            "manuscript": {"title": "Momentum Queues", "body": MANUSCRIPT_BODY, "id": "m1"},
            "review": {"text": FOUR_COMMENT_REVIEW, "id": "rev1", "venue": "ICLR"},
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    S.IngestResponse.model_validate(body)
    assert body["manuscript_id"] == "m1"
    assert body["review_id"] == "rev1"
    expected = len(build_manuscript("m1", "Momentum Queues", MANUSCRIPT_BODY).chunks)
    assert body["chunk_count"] == expected


def test_ingest_rejects_empty_title(client) -> None:
    resp = client.post(
        "/api/reviews",
        json={
            "manuscript": {"title": "", "body": MANUSCRIPT_BODY},
            "review": {"text": FOUR_COMMENT_REVIEW},
        },
    )
    assert resp.status_code == 400
    body = resp.json()
    S.ErrorBody.model_validate(body)
    assert "manuscript.title" in body["error"]
    assert body["stage"] is None


def test_unknown_request_field_is_rejected(client) -> None:
    _, r_id = ingest(client)
    resp = client.post("/api/extract", json={"review_id": r_id, "surprise": 1})
    assert resp.status_code == 400
    assert "surprise" in resp.json()["error"]


# ---- background runs -------------------------------------------------------


def test_extract_run_completes_with_four_comments(client) -> None:
    _, r_id = ingest(client)
    resp = client.post("/api/extract", json={"review_id": r_id})
    assert resp.status_code == 202
    accepted = resp.json()
    S.RunAccepted.model_validate(accepted)
    assert accepted["kind"] == "extract"
    assert accepted["status"] == "queued"
    assert accepted["run_id"].startswith("extract-")

    detail = wait_run(client, accepted["run_id"])
    S.RunDetail.model_validate(detail)
    assert detail["status"] == "completed", detail["error"]
    assert "request" not in detail
    result = detail["result"]
    assert result["review_id"] == r_id
    assert [c["ordinal"] for c in result["comments"]] == [0, 1, 2, 3]
    assert [c["id"] for c in result["comments"]] == [f"{r_id}:c{i}" for i in range(1, 5)]
    assert all(c["distilled"] is False for c in result["comments"])
    profile = result["profile"]
    assert set(profile["global_profile"]) == {
        "overall_stance",
        "overall_attitude",
        "dominant_concern",
        "reviewer_expertise",
        "confidence",
    }
    assert [row["comment_id"] for row in profile["comment_analysis"]] == [
        f"{r_id}:c{i}" for i in range(1, 5)
    ]
    # extract result carries the comment wording alongside each analysis row
    assert all("comment_text" in row for row in profile["comment_analysis"])


def test_extract_for_unknown_review_is_404_before_any_run(client) -> None:
    resp = client.post("/api/extract", json={"review_id": "r-missing"})
    assert resp.status_code == 404
    body = resp.json()
    assert "ingest it first" in body["error"]
    assert body["stage"] is None
    assert client.get("/api/runs").json()["runs"] == []


def test_tsr_run_produces_full_record(client) -> None:
    m_id, r_id = ingest(client)
    resp = client.post(
        "/api/tsr",
        json={"manuscript_id": m_id, "review_id": r_id, "comment_id": f"{r_id}:c1"},
    )
    assert resp.status_code == 202
    detail = wait_run(client, resp.json()["run_id"])
    assert detail["status"] == "completed", detail["error"]
    result = detail["result"]
    assert result["manuscript_id"] == m_id
    assert result["review_id"] == r_id
    assert result["comment_id"] == f"{r_id}:c1"
    assert result["strategy"] and all(isinstance(s, str) for s in result["strategy"])
    assert result["response"].strip()
    assert [e["stage"] for e in result["provider_trace"]] == [
        "analysis",
        "retrieval",
        "strategy",
        "response",
    ]
    assert result["retrieved_chunk_ids"]
    assert all(cid.startswith(f"{m_id}:") for cid in result["retrieved_chunk_ids"])


def test_tsr_with_unknown_comment_fails_the_run(client) -> None:
    m_id, r_id = ingest(client)
    resp = client.post(
        "/api/tsr",
        json={"manuscript_id": m_id, "review_id": r_id, "comment_id": "nope"},
    )
    assert resp.status_code == 202
    detail = wait_run(client, resp.json()["run_id"])
    assert detail["status"] == "failed"
    assert "not found" in detail["error"]
    assert detail["result"] is None


def test_candidates_run_returns_scored_group(client) -> None:
    m_id, r_id = ingest(client)
    resp = client.post(
        "/api/candidates",
        json={
            "manuscript_id": m_id,
            "review_id": r_id,
            "comment_id": f"{r_id}:c1",
            "group_size": 3,
            "base_seed": 7,
        },
    )
    assert resp.status_code == 202
    assert resp.json()["kind"] == "candidates"
    detail = wait_run(client, resp.json()["run_id"])
    assert detail["status"] == "completed", detail["error"]
    result = detail["result"]
    assert result["comment_id"] == f"{r_id}:c1"
    assert result["size"] == 3
    assert len(result["candidates"]) == 3
    for row in result["candidates"]:
        assert set(row) == {"text", "reward", "advantage"}
        assert 0.0 <= row["reward"]["total"] <= 1.0
    assert abs(sum(row["advantage"] for row in result["candidates"])) < 1e-9
    assert 0 <= result["best_index"] < 3
    totals = [row["reward"]["total"] for row in result["candidates"]]
    assert totals[result["best_index"]] == max(totals)
    assert result["weights"] == [0.1, 0.3, 0.3, 0.3]


def test_candidates_strategy_override_changes_prompt_and_keeps_old_run(client) -> None:
    m_id, r_id = ingest(client)
    base = {
        "manuscript_id": m_id,
        "review_id": r_id,
        "comment_id": f"{r_id}:c1",
        "group_size": 2,
        "base_seed": 3,
    }
    plain = wait_run(client, client.post("/api/candidates", json=base).json()["run_id"])
    steered = wait_run(
        client,
        client.post(
            "/api/candidates",
            json={**base, "strategy_override": ["Acknowledge the concern", "Cite paragraph 2"]},
        ).json()["run_id"],
    )
    assert plain["status"] == "completed" and steered["status"] == "completed"
    # the override conditions the prompt, so the sampled texts diverge
    assert steered["result"]["prompt_id"] != plain["result"]["prompt_id"]
    assert steered["result"]["candidates"][0]["text"] != plain["result"]["candidates"][0]["text"]
    # the earlier run is untouched by the regeneration
    again = client.get(f"/api/runs/{plain['run_id']}").json()
    assert again["result"] == plain["result"]


def test_candidates_blank_override_step_maps_to_400(client) -> None:
    m_id, r_id = ingest(client)
    resp = client.post(
        "/api/candidates",
        json={
            "manuscript_id": m_id,
            "review_id": r_id,
            "comment_id": f"{r_id}:c1",
            "strategy_override": ["Lead with the fix", "   "],
        },
    )
    assert resp.status_code == 400
    assert "non-empty" in resp.json()["error"]


def test_candidates_with_bad_weight_sum_maps_to_400(client) -> None:
    m_id, r_id = ingest(client)
    resp = client.post(
        "/api/candidates",
        json={
            "manuscript_id": m_id,
            "review_id": r_id,
            "comment_id": f"{r_id}:c1",
            "weights": [0.4, 0.3, 0.3, 0.2],
        },
    )
    assert resp.status_code == 400
    body = resp.json()
    assert "sum to 1" in body["error"]
    assert body["stage"] is None


def test_run_listing_orders_by_creation(client) -> None:
    _, r_id = ingest(client)
    first = client.post("/api/extract", json={"review_id": r_id}).json()["run_id"]
    second = client.post("/api/extract", json={"review_id": r_id}).json()["run_id"]
    wait_run(client, first)
    wait_run(client, second)
    body = client.get("/api/runs").json()
    S.RunList.model_validate(body)
    rows = body["runs"]
    assert {first, second} <= {r["run_id"] for r in rows}
    keys = [(r["created_at"], r["run_id"]) for r in rows]
    assert keys == sorted(keys)
    assert all("request" not in r for r in rows)


def test_run_detail_for_unknown_run_is_404(client) -> None:
    resp = client.get("/api/runs/extract-000000000000")
    assert resp.status_code == 404
    assert resp.json()["stage"] is None


# ---- SSE event streams ------------------------------------------------------


def test_extract_event_stream_replays_full_lifecycle(client) -> None:
    _, r_id = ingest(client)
    run_id = client.post("/api/extract", json={"review_id": r_id}).json()["run_id"]
    wait_run(client, run_id)

    resp = client.get(f"/api/runs/{run_id}/events")
    assert resp.status_code == 200
    assert resp.headers["content-type"].startswith("text/event-stream")
    events = sse_events(resp.text)
    names = [e["event"] for e in events]
    assert names[0] == "queued"
    assert names[1] == "running"
    assert names[-1] == "completed"
    assert [e["seq"] for e in events] == list(range(len(events)))
    stage_pairs = [(e["stage"], e["status"]) for e in events if e["event"] == "stage"]
    assert stage_pairs == [("analysis", "started"), ("analysis", "finished")]


def test_tsr_event_stream_covers_every_stage_in_order(client) -> None:
    m_id, r_id = ingest(client)
    run_id = client.post(
        "/api/tsr",
        json={"manuscript_id": m_id, "review_id": r_id, "comment_id": f"{r_id}:c2"},
    ).json()["run_id"]
    wait_run(client, run_id)

    events = sse_events(client.get(f"/api/runs/{run_id}/events").text)
    stage_pairs = [(e["stage"], e["status"]) for e in events if e["event"] == "stage"]
    assert stage_pairs == [
        (stage, status)
        for stage in ("analysis", "retrieval", "strategy", "response")
        for status in ("started", "finished")
    ]
    assert events[-1]["event"] == "completed"


def test_event_stream_for_unknown_run_is_404(client) -> None:
    resp = client.get("/api/runs/tsr-ffffffffffff/events")
    assert resp.status_code == 404


def test_crash_recovered_run_streams_synthetic_terminal(tmp_path) -> None:
    data_dir = tmp_path / "runs"
    seed_store = RunStore(data_dir)
    meta = seed_store.create("extract", {"review_id": "rev1"}, run_id="extract-dead")
    seed_bus = EventBus(seed_store)
    seed_bus.publish(meta.run_id, "queued", kind="extract")
    # journal left behind: the service must treat the run as interrupted
    config = AppConfig(mock=True, data_dir=str(data_dir))
    with TestClient(create_app(config, build_runtime(config))) as client:
        detail = client.get(f"/api/runs/{meta.run_id}").json()
        assert detail["status"] == "failed"
        assert detail["error"] == "interrupted: process exited before the run finished"

        events = sse_events(client.get(f"/api/runs/{meta.run_id}/events").text)
        assert [e["event"] for e in events] == ["queued", "failed"]
        assert events[-1]["synthetic"] is True
        assert events[-1]["error"] == detail["error"]


# ---- sync scoring and judging -----------------------------------------------


def test_score_endpoint_matches_weighted_sum(client) -> None:
    resp = client.post(
        "/api/score",
        json={
            "text": WELL_FORMED,
            "review_text": FOUR_COMMENT_REVIEW,
            "comment_text": "The novelty is not strongly articulated.",
            "evidence_text": "[m1:p2] Ablations isolate the contribution of queue size.",
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    S.ScoreResponse.model_validate(body)
    assert body["format"] == 1.0
    expected = (
        0.1 * body["format"] + 0.3 * body["think"] + 0.3 * body["resp"] + 0.3 * body["div"]
    )
    assert body["total"] == pytest.approx(expected, abs=1e-9)
    assert 0.0 <= body["total"] <= 1.0
    assert body["raw_judge_scores"]


def test_score_endpoint_floors_untagged_text(client) -> None:
    resp = client.post(
        "/api/score",
        json={
            "text": "no tags anywhere in this draft",
            "review_text": FOUR_COMMENT_REVIEW,
            "comment_text": "The novelty is not strongly articulated.",
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["format"] == 0.0
    assert body["total"] == pytest.approx(0.09, abs=1e-9)


def test_score_rejects_empty_text(client) -> None:
    resp = client.post(
        "/api/score",
        json={"text": "", "review_text": "r", "comment_text": "c"},
    )
    assert resp.status_code == 400
    assert "text" in resp.json()["error"]


def test_judge_endpoint_returns_scorecard(client) -> None:
    resp = client.post(
        "/api/judge",
        json={
            "review_text": FOUR_COMMENT_REVIEW,
            "comment_text": "Figure 3 is hard to interpret.",
            "response_text": "We relabeled the axes and adopted a colorblind-safe palette.",
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    S.JudgeResponse.model_validate(body)
    assert set(body["scores"]) == {"Attitude", "Clarity", "Persuasiveness", "Constructiveness"}
    assert all(0 <= v <= 10 for v in body["scores"].values())
    assert body["explanation"].strip()


def test_judge_is_deterministic_for_identical_input(client) -> None:
    payload = {
        "review_text": FOUR_COMMENT_REVIEW,
        "comment_text": "Figure 3 is hard to interpret.",
        "response_text": "We relabeled the axes.",
    }
    first = client.post("/api/judge", json=payload).json()
    second = client.post("/api/judge", json=payload).json()
    assert first == second


# ---- run store ---------------------------------------------------------------


def test_store_create_and_get_round_trip(tmp_path) -> None:
    store = RunStore(tmp_path / "runs")
    meta = store.create("extract", {"review_id": "rev1"})
    assert meta.status == "queued"
    assert meta.run_id.startswith("extract-")
    loaded = store.get(meta.run_id)
    assert loaded.to_payload() == meta.to_payload()
    assert loaded.request == {"review_id": "rev1"}


def test_store_rejects_duplicate_run_id(tmp_path) -> None:
    store = RunStore(tmp_path / "runs")
    store.create("tsr", {}, run_id="tsr-1")
    with pytest.raises(DuplicateRun):
        store.create("tsr", {}, run_id="tsr-1")


def test_store_unknown_run_raises(tmp_path) -> None:
    store = RunStore(tmp_path / "runs")
    with pytest.raises(MissingRun):
        store.get("tsr-absent")
    with pytest.raises(MissingRun):
        store.result("tsr-absent")


def test_store_finish_persists_result_and_clears_journal(tmp_path) -> None:
    store = RunStore(tmp_path / "runs")
    meta = store.create("tsr", {}, run_id="tsr-ok")
    journal = tmp_path / "runs" / "tsr-ok" / ".journal"
    assert journal.exists()
    assert store.result("tsr-ok") is None

    store.mark_running("tsr-ok")
    assert store.get("tsr-ok").status == "running"
    store.finish("tsr-ok", {"answer": 42})
    done = store.get("tsr-ok")
    assert done.status == "completed"
    assert done.finished_at is not None
    assert done.error is None
    assert store.result("tsr-ok") == {"answer": 42}
    assert not journal.exists()
    assert meta.created_at == done.created_at


def test_store_fail_records_error(tmp_path) -> None:
    store = RunStore(tmp_path / "runs")
    store.create("tsr", {}, run_id="tsr-bad")
    store.fail("tsr-bad", "ProviderError: upstream refused")
    meta = store.get("tsr-bad")
    assert meta.status == "failed"
    assert meta.error == "ProviderError: upstream refused"
    assert not (tmp_path / "runs" / "tsr-bad" / ".journal").exists()


def test_store_recovery_fails_runs_left_live(tmp_path) -> None:
    first = RunStore(tmp_path / "runs")
    first.create("extract", {}, run_id="extract-live")
    first.mark_running("extract-live")
    # no finish/fail: simulates the process dying mid-run

    second = RunStore(tmp_path / "runs")
    meta = second.get("extract-live")
    assert meta.status == "failed"
    assert meta.error == "interrupted: process exited before the run finished"
    assert meta.finished_at is not None
    assert not (tmp_path / "runs" / "extract-live" / ".journal").exists()


def test_store_recovery_leaves_terminal_runs_alone(tmp_path) -> None:
    first = RunStore(tmp_path / "runs")
    first.create("extract", {}, run_id="extract-done")
    first.finish("extract-done", {"n": 1})
    # a stray journal must not flip a durably terminal run back to failed
    (tmp_path / "runs" / "extract-done" / ".journal").touch()

    second = RunStore(tmp_path / "runs")
    meta = second.get("extract-done")
    assert meta.status == "completed"
    assert meta.error is None
    assert not (tmp_path / "runs" / "extract-done" / ".journal").exists()


def test_store_recovery_ignores_journal_without_meta(tmp_path) -> None:
    orphan = tmp_path / "runs" / "extract-ghost"
    orphan.mkdir(parents=True)
    (orphan / ".journal").touch()
    store = RunStore(tmp_path / "runs")
    assert store.list() == []
    assert not (orphan / ".journal").exists()


def test_store_list_sorts_by_creation_then_id(tmp_path) -> None:
    store = RunStore(tmp_path / "runs")
    for run_id in ("tsr-c", "tsr-a", "tsr-b"):
        store.create("tsr", {}, run_id=run_id)
    keys = [(m.created_at, m.run_id) for m in store.list()]
    assert keys == sorted(keys)
    assert {m.run_id for m in store.list()} == {"tsr-a", "tsr-b", "tsr-c"}


# ---- event bus ----------------------------------------------------------------


def make_bus(tmp_path) -> tuple[RunStore, EventBus]:
    store = RunStore(tmp_path / "runs")
    return store, EventBus(store)


def test_bus_assigns_gapless_sequence_numbers(tmp_path) -> None:
    store, bus = make_bus(tmp_path)
    meta = store.create("extract", {}, run_id="extract-seq")
    records = [
        bus.publish(meta.run_id, "queued"),
        bus.publish(meta.run_id, "running"),
        bus.publish(meta.run_id, "stage", stage="analysis", status="started"),
    ]
    assert [r["seq"] for r in records] == [0, 1, 2]
    lines = store.events_path(meta.run_id).read_text(encoding="utf-8").splitlines()
    assert [json.loads(line)["seq"] for line in lines] == [0, 1, 2]
    assert json.loads(lines[2])["stage"] == "analysis"


def test_bus_stream_replays_then_stops_at_terminal(tmp_path) -> None:
    store, bus = make_bus(tmp_path)
    meta = store.create("extract", {}, run_id="extract-replay")
    bus.publish(meta.run_id, "queued")
    bus.publish(meta.run_id, "running")
    store.finish(meta.run_id, {})
    bus.publish(meta.run_id, "completed")
    bus.publish(meta.run_id, "stage", stage="late", status="ignored")

    names = [r["event"] for r in bus.stream(meta.run_id)]
    assert names == ["queued", "running", "completed"]


def test_bus_stream_follows_a_live_publisher(tmp_path) -> None:
    store, bus = make_bus(tmp_path)
    meta = store.create("tsr", {}, run_id="tsr-live")
    bus.publish(meta.run_id, "queued")

    def publisher() -> None:
        time.sleep(0.03)
        bus.publish(meta.run_id, "running")
        time.sleep(0.03)
        bus.publish(meta.run_id, "completed")
        store.finish(meta.run_id, {})

    thread = threading.Thread(target=publisher)
    thread.start()
    try:
        names = [r["event"] for r in bus.stream(meta.run_id, poll_s=0.01)]
    finally:
        thread.join()
    assert names == ["queued", "running", "completed"]


def test_bus_replays_from_disk_after_restart(tmp_path) -> None:
    store, bus = make_bus(tmp_path)
    meta = store.create("extract", {}, run_id="extract-restart")
    bus.publish(meta.run_id, "queued")
    bus.publish(meta.run_id, "running")
    store.finish(meta.run_id, {})
    bus.publish(meta.run_id, "completed")

    fresh = EventBus(RunStore(tmp_path / "runs"))
    names = [r["event"] for r in fresh.stream(meta.run_id)]
    assert names == ["queued", "running", "completed"]


def test_bus_synthesizes_terminal_for_silent_failure(tmp_path) -> None:
    store, bus = make_bus(tmp_path)
    meta = store.create("extract", {}, run_id="extract-silent")
    bus.publish(meta.run_id, "queued")
    store.fail(meta.run_id, "boom")

    records = list(bus.stream(meta.run_id))
    assert [r["event"] for r in records] == ["queued", "failed"]
    last = records[-1]
    assert last["synthetic"] is True
    assert last["error"] == "boom"
    assert last["seq"] == 1


def test_bus_stream_unknown_run_raises(tmp_path) -> None:
    _, bus = make_bus(tmp_path)
    with pytest.raises(MissingRun):
        list(bus.stream("extract-void"))


def test_format_sse_framing() -> None:
    record = {"event": "stage", "ts": "2026-01-01T00:00:00.000+00:00", "seq": 3}
    framed = format_sse(record)
    assert framed.startswith("event: stage\ndata: ")
    assert framed.endswith("\n\n")
    assert json.loads(framed.split("data: ", 1)[1].strip()) == record
