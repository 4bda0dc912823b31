"""Durable run records for asynchronous pipeline jobs.

Each run owns a directory: meta.json (status), result.json (on success),
events.jsonl (progress log), and a `.journal` marker that exists only while
the run is live. A marker found at startup means the process died mid-run;
such runs are marked failed rather than silently resurrected.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..errors import DuplicateRun, MissingRun

TERMINAL_STATUSES = ("completed", "failed")
RUN_STATUSES = ("queued", "running") + TERMINAL_STATUSES


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def new_run_id(kind: str) -> str:
    return f"{kind}-{uuid.uuid4().hex[:12]}"


@dataclass
class RunMeta:
    run_id: str
    kind: str
    status: str
    created_at: str
    finished_at: str | None = None
    error: str | None = None
    request: dict = field(default_factory=dict)

    def to_payload(self) -> dict:
        return {
            "run_id": self.run_id,
            "kind": self.kind,
            "status": self.status,
            "created_at": self.created_at,
            "finished_at": self.finished_at,
            "error": self.error,
            "request": self.request,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "RunMeta":
        return cls(**payload)


class RunStore:
    """Filesystem-backed registry of runs; safe for concurrent callers."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._recover_crashed()

    def _dir(self, run_id: str) -> Path:
        return self.root / run_id

    def _meta_path(self, run_id: str) -> Path:
        return self._dir(run_id) / "meta.json"

    def _journal_path(self, run_id: str) -> Path:
        return self._dir(run_id) / ".journal"

    def _write_meta(self, meta: RunMeta) -> None:
        path = self._meta_path(meta.run_id)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(meta.to_payload(), indent=2), encoding="utf-8")
        os.replace(tmp, path)

    def _recover_crashed(self) -> None:
        for journal in self.root.glob("*/.journal"):
            run_id = journal.parent.name
            try:
                meta = self.get(run_id)
            except MissingRun:
                journal.unlink(missing_ok=True)
                continue
            if meta.status not in TERMINAL_STATUSES:
                meta.status = "failed"
                meta.error = "interrupted: process exited before the run finished"
                meta.finished_at = _now_iso()
                self._write_meta(meta)
            journal.unlink(missing_ok=True)

    def create(self, kind: str, request: dict, run_id: str | None = None) -> RunMeta:
        with self._lock:
            run_id = run_id or new_run_id(kind)
            run_dir = self._dir(run_id)
            if run_dir.exists():
                raise DuplicateRun(f"run {run_id!r} already exists")
            run_dir.mkdir(parents=True)
            # journal first: its presence marks the run as live
            self._journal_path(run_id).touch()
            meta = RunMeta(
                run_id=run_id,
                kind=kind,
                status="queued",
                created_at=_now_iso(),
                request=request,
            )
            self._write_meta(meta)
            return meta

    def get(self, run_id: str) -> RunMeta:
        path = self._meta_path(run_id)
        if not path.exists():
            raise MissingRun(f"no run named {run_id!r}")
        return RunMeta.from_payload(json.loads(path.read_text(encoding="utf-8")))

    def list(self) -> list[RunMeta]:
        metas = []
        for meta_path in self.root.glob("*/meta.json"):
            metas.append(RunMeta.from_payload(json.loads(meta_path.read_text(encoding="utf-8"))))
        metas.sort(key=lambda m: (m.created_at, m.run_id))
        return metas

    def mark_running(self, run_id: str) -> RunMeta:
        with self._lock:
            meta = self.get(run_id)
            meta.status = "running"
            self._write_meta(meta)
            return meta

    def finish(self, run_id: str, result: dict | None = None) -> RunMeta:
        with self._lock:
            meta = self.get(run_id)
            if result is not None:
                result_path = self._dir(run_id) / "result.json"
                tmp = result_path.with_suffix(".tmp")
                tmp.write_text(json.dumps(result, indent=2), encoding="utf-8")
                os.replace(tmp, result_path)
            meta.status = "completed"
            meta.finished_at = _now_iso()
            self._write_meta(meta)
            # journal removed last: the run is durably terminal now
            self._journal_path(run_id).unlink(missing_ok=True)
            return meta

    def fail(self, run_id: str, error: str) -> RunMeta:
        with self._lock:
            meta = self.get(run_id)
            meta.status = "failed"
            meta.error = error
            meta.finished_at = _now_iso()
            self._write_meta(meta)
            self._journal_path(run_id).unlink(missing_ok=True)
            return meta

    def result(self, run_id: str) -> dict | None:
        self.get(run_id)  # raises MissingRun for unknown ids
        path = self._dir(run_id) / "result.json"
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def events_path(self, run_id: str) -> Path:
        return self._dir(run_id) / "events.jsonl"
