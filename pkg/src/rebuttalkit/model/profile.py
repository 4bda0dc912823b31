"""Reviewer-profile JSON schema: strict validation and round-tripping.

The wire shape is::

    {
      "global_profile": {
        "overall_stance": ..., "overall_attitude": ..., "dominant_concern": ...,
        "reviewer_expertise": ..., "confidence": 1-10
      },
      "comment_analysis": [
        {"comment_id": ..., "comment_text": ...?, "category": ...,
         "sub_category": ..., "severity": ..., "confidence": 1-10},
        ...
      ]
    }

Unknown keys, missing required keys, labels outside the vocabularies and
confidences outside [1, 10] are all rejected; nothing is coerced silently.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from ..errors import OutOfRange, SchemaMismatch
from .types import MacroProfile, MicroAnalysis, ReviewerProfile

_GLOBAL_KEYS = {
    "overall_stance",
    "overall_attitude",
    "dominant_concern",
    "reviewer_expertise",
    "confidence",
}
_COMMENT_REQUIRED = {"comment_id", "category", "sub_category", "severity", "confidence"}
_COMMENT_OPTIONAL = {"comment_text"}


def _as_mapping(raw: str | Mapping[str, Any]) -> Mapping[str, Any]:
    if isinstance(raw, str):
        try:
            parsed = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaMismatch(f"profile payload is not valid JSON: {exc}") from exc
        if not isinstance(parsed, dict):
            raise SchemaMismatch("profile payload must be a JSON object")
        return parsed
    if isinstance(raw, Mapping):
        return raw
    raise SchemaMismatch(f"profile payload must be JSON text or an object, got {type(raw).__name__}")


def _check_keys(obj: Mapping[str, Any], required: set[str], optional: set[str], where: str) -> None:
    keys = set(obj)
    missing = required - keys
    if missing:
        raise SchemaMismatch(f"{where} missing required keys: {sorted(missing)}")
    extra = keys - required - optional
    if extra:
        raise SchemaMismatch(f"{where} has unknown keys: {sorted(extra)}")


def _confidence(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise OutOfRange(f"{where} confidence must be an integer, got {value!r}")
    return value


def profile_from_payload(raw: str | Mapping[str, Any]) -> tuple[ReviewerProfile, dict[str, str | None]]:
    """Parse and validate a profile payload.

    Returns the profile plus a comment_id -> comment_text mapping (text is
    None when the payload omitted it).
    """
    payload = _as_mapping(raw)
    _check_keys(payload, {"global_profile", "comment_analysis"}, set(), "profile")

    global_obj = payload["global_profile"]
    if not isinstance(global_obj, Mapping):
        raise SchemaMismatch("global_profile must be an object")
    _check_keys(global_obj, _GLOBAL_KEYS, set(), "global_profile")
    macro = MacroProfile(
        overall_stance=global_obj["overall_stance"],
        overall_attitude=global_obj["overall_attitude"],
        dominant_concern=global_obj["dominant_concern"],
        reviewer_expertise=global_obj["reviewer_expertise"],
        confidence=_confidence(global_obj["confidence"], "global_profile"),
    )

    items = payload["comment_analysis"]
    if not isinstance(items, list):
        raise SchemaMismatch("comment_analysis must be a list")
    micros: list[MicroAnalysis] = []
    texts: dict[str, str | None] = {}
    for idx, item in enumerate(items):
        where = f"comment_analysis[{idx}]"
        if not isinstance(item, Mapping):
            raise SchemaMismatch(f"{where} must be an object")
        _check_keys(item, _COMMENT_REQUIRED, _COMMENT_OPTIONAL, where)
        comment_id = item["comment_id"]
        if isinstance(comment_id, bool) or not isinstance(comment_id, (str, int)):
            raise SchemaMismatch(f"{where} comment_id must be a string or integer")
        cid = str(comment_id)
        micros.append(
            MicroAnalysis(
                comment_id=cid,
                category=item["category"],
                sub_category=item["sub_category"],
                severity=item["severity"],
                confidence=_confidence(item["confidence"], where),
            )
        )
        text = item.get("comment_text")
        if text is not None and not isinstance(text, str):
            raise SchemaMismatch(f"{where} comment_text must be a string when present")
        texts[cid] = text
    profile = ReviewerProfile(macro=macro, per_comment=tuple(micros))
    return profile, texts


def validate_profile(raw: str | Mapping[str, Any]) -> ReviewerProfile:
    """Strictly validate a profile payload, discarding comment texts."""
    profile, _ = profile_from_payload(raw)
    return profile


def profile_to_payload(
    profile: ReviewerProfile,
    comment_texts: Mapping[str, str] | None = None,
) -> dict[str, Any]:
    macro = profile.macro
    payload: dict[str, Any] = {
        "global_profile": {
            "overall_stance": macro.overall_stance,
            "overall_attitude": macro.overall_attitude,
            "dominant_concern": macro.dominant_concern,
            "reviewer_expertise": macro.reviewer_expertise,
            "confidence": macro.confidence,
        },
        "comment_analysis": [],
    }
    for micro in profile.per_comment:
        item: dict[str, Any] = {"comment_id": micro.comment_id}
        if comment_texts and micro.comment_id in comment_texts:
            item["comment_text"] = comment_texts[micro.comment_id]
        item.update(
            category=micro.category,
            sub_category=micro.sub_category,
            severity=micro.severity,
            confidence=micro.confidence,
        )
        payload["comment_analysis"].append(item)
    return payload


def profile_json(profile: ReviewerProfile, comment_texts: Mapping[str, str] | None = None) -> str:
    return json.dumps(profile_to_payload(profile, comment_texts), indent=2, ensure_ascii=False)
