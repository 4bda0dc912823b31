"""Staged drafting engine and its prompt assembly helpers."""

from .engine import (
    NO_EVIDENCE_MARKER,
    SynthesisPair,
    TsrEngine,
    apply_strategy_override,
    evidence_text,
    generate_response,
    generate_strategy,
    parse_strategy_block,
    render_tsr_prompt,
)

__all__ = [
    "NO_EVIDENCE_MARKER",
    "SynthesisPair",
    "TsrEngine",
    "apply_strategy_override",
    "evidence_text",
    "generate_response",
    "generate_strategy",
    "parse_strategy_block",
    "render_tsr_prompt",
]
