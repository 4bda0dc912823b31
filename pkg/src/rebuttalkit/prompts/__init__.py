"""Versioned prompt templates.

Templates live as text assets with ``{{slot}}`` markers; each carries a
content digest so runs can record exactly which template version produced a
given output. Rendering is strict: unknown slots and unfilled markers fail.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from ..util import sha256_hex

_SLOT_RE = re.compile(r"\{\{([a-z_]+)\}\}")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    text: str
    digest: str

    @property
    def slots(self) -> tuple[str, ...]:
        seen: list[str] = []
        for match in _SLOT_RE.finditer(self.text):
            if match.group(1) not in seen:
                seen.append(match.group(1))
        return tuple(seen)

    def render(self, **values: str) -> str:
        unknown = set(values) - set(self.slots)
        if unknown:
            raise ValueError(f"template {self.name} has no slots {sorted(unknown)}")
        missing = set(self.slots) - set(values)
        if missing:
            raise ValueError(f"template {self.name} missing values for {sorted(missing)}")
        out = self.text
        for slot, value in values.items():
            out = out.replace("{{" + slot + "}}", value)
        if _SLOT_RE.search(out):
            raise ValueError(f"template {self.name} rendered with unfilled markers")
        return out


_TEMPLATE_FILES = {
    "reviewer_stance": "reviewer_stance.txt",
    "tsr_single_pass": "tsr_single_pass.txt",
    "strategy": "strategy.txt",
    "response": "response.txt",
    "experiment_demand": "experiment_demand.txt",
    "reply_alignment": "reply_alignment.txt",
    "judge_reasoning_gold": "judge_reasoning_gold.txt",
    "judge_reasoning_rubric": "judge_reasoning_rubric.txt",
    "judge_response": "judge_response.txt",
    "judge_diversity": "judge_diversity.txt",
    "scorecard": "scorecard.txt",
}

_cache: dict[str, PromptTemplate] = {}


def _read_asset(filename: str) -> str:
    return resources.files(__package__).joinpath("assets", filename).read_text(encoding="utf-8")


def load_template(name: str) -> PromptTemplate:
    if name not in _TEMPLATE_FILES:
        raise KeyError(f"unknown template: {name!r}")
    if name not in _cache:
        text = _read_asset(_TEMPLATE_FILES[name])
        _cache[name] = PromptTemplate(name=name, text=text, digest=sha256_hex(text))
    return _cache[name]


def template_digests() -> dict[str, str]:
    return {name: load_template(name).digest for name in sorted(_TEMPLATE_FILES)}


def load_negative_responses() -> list[str]:
    """Built-in low-diversity response exemplars for the diversity judge."""
    raw = _read_asset("negative_responses.json")
    data = json.loads(raw)
    if not isinstance(data, list) or not all(isinstance(x, str) and x.strip() for x in data):
        raise ValueError("negative_responses.json must be a list of non-empty strings")
    return data
