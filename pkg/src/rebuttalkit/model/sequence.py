"""Tagged three-block output format.

A rendered sequence carries exactly one ``<analysis>``, one ``<strategy>``
and one ``<response>`` block, in that order. Tags are emitted lowercase and
parsed case-insensitively. Anything outside the tag pairs is tolerated as
prose; duplicated, missing, unclosed or reordered tags are hard errors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import EmptyBlock, MalformedSequence

TAG_NAMES: tuple[str, str, str] = ("analysis", "strategy", "response")

_TOKEN_RE = re.compile(r"</?(analysis|strategy|response)>", re.IGNORECASE)


def _scan_blocks(rendered: str) -> tuple[str, str, str]:
    tokens = [(m.group(0).startswith("</"), m.group(1).lower(), m.span()) for m in _TOKEN_RE.finditer(rendered)]
    expected: list[tuple[bool, str]] = []
    for name in TAG_NAMES:
        expected.append((False, name))
        expected.append((True, name))
    if [(c, n) for c, n, _ in tokens] != expected:
        found = " ".join(("</" if c else "<") + n + ">" for c, n, _ in tokens)
        raise MalformedSequence(
            f"expected one <analysis>..</analysis> <strategy>..</strategy> "
            f"<response>..</response> in order, found: {found or '(no tags)'}"
        )
    blocks: list[str] = []
    for i in range(0, 6, 2):
        open_span = tokens[i][2]
        close_span = tokens[i + 1][2]
        blocks.append(rendered[open_span[1] : close_span[0]])
    return blocks[0], blocks[1], blocks[2]


def parse_target_sequence(rendered: str) -> tuple[str, str, str]:
    """Return the (analysis, strategy, response) block contents verbatim."""
    if not isinstance(rendered, str) or not rendered.strip():
        raise MalformedSequence("rendered sequence is empty")
    return _scan_blocks(rendered)


def assemble_target_sequence(analysis: str, strategy: str, response: str) -> "TargetSequence":
    """Render the three blocks with lowercase tags.

    The rendering is re-parsed before returning so block contents that embed
    tag tokens fail loudly instead of producing an ambiguous sequence.
    """
    blocks = (analysis, strategy, response)
    for name, blk in zip(TAG_NAMES, blocks):
        if not isinstance(blk, str) or not blk.strip():
            raise EmptyBlock(f"{name} block must be non-empty")
    rendered = "".join(f"<{n}>{b}</{n}>" for n, b in zip(TAG_NAMES, blocks))
    if _scan_blocks(rendered) != blocks:
        raise MalformedSequence("block content embeds tag tokens; sequence would not round-trip")
    return TargetSequence(analysis=analysis, strategy=strategy, response=response, rendered=rendered)


def extract_block(text: str, name: str) -> str | None:
    """Pull a single named block out of free-form provider output.

    Returns None when the block is absent; raises on duplicates so silent
    ambiguity never propagates.
    """
    if name not in TAG_NAMES:
        raise ValueError(f"unknown block name: {name!r}")
    matches = re.findall(rf"<{name}>(.*?)</{name}>", text, re.IGNORECASE | re.DOTALL)
    if not matches:
        return None
    if len(matches) > 1:
        raise MalformedSequence(f"multiple <{name}> blocks found")
    return matches[0]


@dataclass(frozen=True)
class TargetSequence:
    """Parsed-or-assembled three-block sequence plus its exact rendering."""

    analysis: str
    strategy: str
    response: str
    rendered: str

    def __post_init__(self) -> None:
        if _scan_blocks(self.rendered) != (self.analysis, self.strategy, self.response):
            raise MalformedSequence("rendered text disagrees with block fields")

    @classmethod
    def from_rendered(cls, rendered: str) -> "TargetSequence":
        analysis, strategy, response = parse_target_sequence(rendered)
        return cls(analysis=analysis, strategy=strategy, response=response, rendered=rendered)
