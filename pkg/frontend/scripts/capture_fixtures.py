"""Capture wire fixtures for the frontend test suite.

Boots the real service with the mock provider, drives the same flows the
workspace drives, and saves every response body verbatim under
frontend/test/fixtures/.  Re-run after any service contract change:

    python3 frontend/scripts/capture_fixtures.py
"""

from __future__ import annotations

import json
import pathlib
import subprocess
import sys
import tempfile
import time
import urllib.error
import urllib.request

PORT = 8471
BASE = f"http://127.0.0.1:{PORT}"
FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "test" / "fixtures"

REVIEW_TEXT = (
    "Summary of the paper:\n"
    "The paper proposes a contrastive pretraining method built around a momentum "
    "queue of negatives and evaluates it on image classification benchmarks.\n"
    "\n"
    "Strengths:\n"
    "- The writing is generally easy to follow.\n"
    "\n"
    "Weaknesses:\n"
    "1. The proposed method, while having some merit, feels like an incremental "
    "improvement over recent works like DINO and MoCo. The novelty is not strongly "
    "articulated.\n"
    "2. Crucially, the authors did not compare their method's performance when using "
    "a standard ResNet-101 backbone, which makes it hard to fairly judge the results "
    "against other publications.\n"
    "3. Figure 3 is hard to interpret. The axes are not clearly labeled, and the "
    "color choice is poor.\n"
    "4. The paper would be much stronger if the method was also shown to work on "
    "video data, not just static images."
)

MANUSCRIPT_BODY = (
    "Momentum Queues for Contrastive Pretraining\n"
    "\n"
    "We introduce a contrastive pretraining method built around a momentum-updated "
    "queue of negatives, which stabilizes training at small batch sizes while matching "
    "large-batch systems on the standard benchmarks we evaluate.\n"
    "\n"
    "Our evaluation covers linear probing and full fine-tuning on three image "
    "classification datasets, and every number is the mean over five seeds with the "
    "standard deviation reported alongside it in the tables.\n"
    "\n"
    "Ablations isolate the contribution of queue size, momentum coefficient, and "
    "augmentation strength, and the queue dominates the other two factors by a wide "
    "margin on every dataset we tried in this study.\n"
    "\n"
    "Figure 3 plots accuracy against pretraining epochs for all datasets; the axes "
    "show epochs and top-1 accuracy, and each curve is one dataset with its own color "
    "from a colorblind-safe palette described in the caption."
)

EDITED_STRATEGY = [
    "Acknowledge the labeling concern directly",
    "Point to the colorblind-safe palette described in the caption",
    "Commit to re-rendering Figure 3 with labeled axes in the revision",
]


def call(method: str, path: str, body: dict | None = None) -> tuple[int, str]:
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        BASE + path, data=data, method=method,
        headers={"Content-Type": "application/json"} if data else {},
    )
    try:
        with urllib.request.urlopen(req, timeout=30) as resp:
            return resp.status, resp.read().decode()
    except urllib.error.HTTPError as err:
        return err.code, err.read().decode()


def save(name: str, text: str) -> None:
    (FIXTURES / name).write_text(text, encoding="utf-8")
    print(f"  {name}  ({len(text)} bytes)")


def wait_terminal(run_id: str) -> str:
    for _ in range(200):
        _, text = call("GET", f"/api/runs/{run_id}")
        if json.loads(text)["status"] in ("completed", "failed"):
            return text
        time.sleep(0.05)
    raise RuntimeError(f"run {run_id} never finished")


def run_and_capture(kind: str, path: str, body: dict, stem: str) -> dict:
    status, accepted = call("POST", path, body)
    assert status == 202, f"{path} -> {status}: {accepted}"
    run_id = json.loads(accepted)["run_id"]
    detail = wait_terminal(run_id)
    save(f"{stem}_run.json", detail)
    _, events = call("GET", f"/api/runs/{run_id}/events")
    save(f"{stem}_events.sse", events)
    return json.loads(detail)


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        server = subprocess.Popen(
            [sys.executable, "-m", "rebuttalkit", "serve", "--mock", "--port", str(PORT)],
            cwd=tmp, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        )
        try:
            for _ in range(100):
                try:
                    status, text = call("GET", "/api/health")
                    if status == 200:
                        break
                except OSError:
                    time.sleep(0.1)
            else:
                raise RuntimeError("service never came up")

            print("capturing into", FIXTURES)
            save("health.json", text)

            status, text = call(
                "POST", "/api/reviews",
                {
                    "manuscript": {"title": "Momentum Queues", "body": MANUSCRIPT_BODY},
                    "review": {"text": REVIEW_TEXT},
                },
            )
            assert status == 200, text
            save("ingest.json", text)
            ids = json.loads(text)
            m_id, r_id = ids["manuscript_id"], ids["review_id"]

            extract = run_and_capture(
                "extract", "/api/extract", {"review_id": r_id}, "extract"
            )
            comment_id = extract["result"]["comments"][2]["id"]  # the figure comment

            run_and_capture(
                "tsr", "/api/tsr",
                {"manuscript_id": m_id, "review_id": r_id, "comment_id": comment_id},
                "tsr",
            )

            run_and_capture(
                "candidates", "/api/candidates",
                {
                    "manuscript_id": m_id, "review_id": r_id, "comment_id": comment_id,
                    "group_size": 5, "base_seed": 0,
                },
                "candidates",
            )

            override = run_and_capture(
                "candidates", "/api/candidates",
                {
                    "manuscript_id": m_id, "review_id": r_id, "comment_id": comment_id,
                    "group_size": 5, "base_seed": 0,
                    "strategy_override": EDITED_STRATEGY,
                },
                "candidates_override",
            )

            # a failed run: unknown comment id fails during the job
            run_and_capture(
                "tsr", "/api/tsr",
                {"manuscript_id": m_id, "review_id": r_id, "comment_id": f"{r_id}:c9"},
                "failed_tsr",
            )

            picked = override["result"]["candidates"][override["result"]["best_index"]]
            status, text = call(
                "POST", "/api/score",
                {
                    "text": picked["text"],
                    "review_text": REVIEW_TEXT,
                    "comment_text": extract["result"]["comments"][2]["text"],
                },
            )
            assert status == 200, text
            save("score.json", text)

            status, text = call("GET", "/api/runs")
            assert status == 200, text
            save("runs_list.json", text)

            status, text = call("POST", "/api/extract", {"review_id": "r-000000000000"})
            assert status == 404, text
            save("error_missing_review.json", text)

            status, text = call(
                "POST", "/api/candidates",
                {
                    "manuscript_id": m_id, "review_id": r_id, "comment_id": comment_id,
                    "strategy_override": ["fine", "   "],
                },
            )
            assert status == 400, text
            save("error_blank_step.json", text)

            print("done")
            return 0
        finally:
            server.terminate()
            server.wait(timeout=10)


if __name__ == "__main__":
    raise SystemExit(main())
