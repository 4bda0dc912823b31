"""Small shared helpers: digests, canonical JSON, balanced JSON extraction."""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .errors import SchemaMismatch


def sha256_hex(text: str | bytes) -> str:
    data = text.encode("utf-8") if isinstance(text, str) else text
    return hashlib.sha256(data).hexdigest()


def canonical_json(payload: Any) -> str:
    """Serialize with sorted keys and no incidental whitespace drift."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def stable_seed(*parts: Any) -> int:
    """Map arbitrary parts to a 63-bit seed, stable across processes."""
    digest = hashlib.sha256(canonical_json([str(p) for p in parts]).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def extract_json_object(text: str) -> dict[str, Any]:
    """Return the first balanced top-level JSON object embedded in ``text``.

    Providers often wrap JSON in prose or code fences; a brace-balanced scan
    that respects string literals recovers the object without guessing at
    fence styles.
    """
    start = text.find("{")
    while start != -1:
        depth = 0
        in_string = False
        escaped = False
        for idx in range(start, len(text)):
            ch = text[idx]
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
                continue
            if ch == '"':
                in_string = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    candidate = text[start : idx + 1]
                    try:
                        parsed = json.loads(candidate)
                    except json.JSONDecodeError:
                        break
                    if isinstance(parsed, dict):
                        return parsed
                    break
        start = text.find("{", start + 1)
    raise SchemaMismatch("no balanced JSON object found in text")
