"""Content-addressed on-disk cache for deterministic chat replies."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any

from ..util import canonical_json, sha256_hex

logger = logging.getLogger(__name__)


class ResponseCache:
    """JSON files keyed by (model_id, prompt_digest, temperature, seed).

    The full key tuple is stored inside each entry and re-checked on read,
    so a hash collision can never surface a reply for a different tuple.
    """

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(model_id: str, prompt_digest: str, temperature: float, seed: int | None) -> dict[str, Any]:
        return {
            "model_id": model_id,
            "prompt_digest": prompt_digest,
            "temperature": float(temperature),
            "seed": seed,
        }

    def _path(self, key: dict[str, Any]) -> Path:
        return self.root / (sha256_hex(canonical_json(key)) + ".json")

    def get(self, key: dict[str, Any]) -> str | None:
        path = self._path(key)
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None
        if entry.get("key") != key:
            logger.warning("cache entry %s keyed for a different tuple; ignoring", path.name)
            return None
        reply = entry.get("reply")
        return reply if isinstance(reply, str) else None

    def put(self, key: dict[str, Any], reply: str) -> None:
        path = self._path(key)
        payload = json.dumps({"key": key, "reply": reply}, ensure_ascii=False)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except OSError:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
