"""Per-run progress events with replay-then-follow streaming.

Events are appended to memory and to the run's events.jsonl. A subscriber
first replays everything already recorded, then blocks for new events until
it sees a terminal one. Finished runs stream correctly after a process
restart because the JSONL file is the source of truth for replay.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from typing import Iterator

from .runs import RunStore, TERMINAL_STATUSES

TERMINAL_EVENTS = ("completed", "failed")


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class EventBus:
    def __init__(self, store: RunStore) -> None:
        self._store = store
        self._events: dict[str, list[dict]] = {}
        self._cond = threading.Condition()

    def publish(self, run_id: str, event: str, **data: object) -> dict:
        record = {"event": event, "ts": _now_iso(), **data}
        with self._cond:
            seq = len(self._events.setdefault(run_id, []))
            record["seq"] = seq
            self._events[run_id].append(record)
            with self._store.events_path(run_id).open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record) + "\n")
            self._cond.notify_all()
        return record

    def _snapshot(self, run_id: str) -> list[dict]:
        if run_id in self._events:
            return list(self._events[run_id])
        path = self._store.events_path(run_id)
        if not path.exists():
            return []
        return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]

    @staticmethod
    def _is_terminal(record: dict) -> bool:
        return record.get("event") in TERMINAL_EVENTS

    def stream(self, run_id: str, poll_s: float = 0.25) -> Iterator[dict]:
        """Yield all events for a run, then follow until a terminal event."""
        self._store.get(run_id)  # raises MissingRun
        cursor = 0
        while True:
            with self._cond:
                events = self._snapshot(run_id)
                fresh = events[cursor:]
                cursor = len(events)
                meta = self._store.get(run_id) if not fresh else None
                if not fresh and meta.status not in TERMINAL_STATUSES:
                    self._cond.wait(timeout=poll_s)
            for record in fresh:
                yield record
                if self._is_terminal(record):
                    return
            if meta is not None and meta.status in TERMINAL_STATUSES:
                # terminal status without a closing event (crash recovery):
                # synthesize one so subscribers always get closure
                yield {
                    "event": meta.status,
                    "ts": _now_iso(),
                    "seq": cursor,
                    "error": meta.error,
                    "synthetic": True,
                }
                return


def format_sse(record: dict) -> str:
    """One event in text/event-stream framing."""
    return f"event: {record['event']}\ndata: {json.dumps(record)}\n\n"
