"""Paragraph chunking for manuscripts."""

from __future__ import annotations

from ..model import ManuscriptChunk, ManuscriptDocument

MIN_PARAGRAPH_WORDS = 15


def paragraphs(body: str) -> list[str]:
    """Non-empty paragraphs of ``body``, split on blank lines."""
    parts: list[str] = []
    current: list[str] = []
    for line in body.splitlines():
        if line.strip():
            current.append(line.rstrip())
        elif current:
            parts.append("\n".join(current).strip())
            current = []
    if current:
        parts.append("\n".join(current).strip())
    return [p for p in parts if p]


def _word_count(text: str) -> int:
    return len(text.split())


def chunk_by_paragraph(
    body: str,
    *,
    id_prefix: str = "p",
    min_words: int = MIN_PARAGRAPH_WORDS,
) -> list[ManuscriptChunk]:
    """One chunk per paragraph, with short paragraphs merged.

    A paragraph under ``min_words`` words (headings, stray lines) is merged
    into the following paragraph; a short trailing remainder is merged
    backward into the last chunk. Ordinals count 0..n-1 in document order.
    """
    texts: list[str] = []
    buffer: list[str] = []
    for para in paragraphs(body):
        buffer.append(para)
        joined = "\n\n".join(buffer)
        if _word_count(joined) >= min_words:
            texts.append(joined)
            buffer = []
    if buffer:
        leftover = "\n\n".join(buffer)
        if texts:
            texts[-1] = texts[-1] + "\n\n" + leftover
        else:
            texts.append(leftover)
    return [
        ManuscriptChunk(id=f"{id_prefix}{i}", ordinal=i, text=text)
        for i, text in enumerate(texts)
    ]


def build_manuscript(manuscript_id: str, title: str, body: str, *, min_words: int = MIN_PARAGRAPH_WORDS) -> ManuscriptDocument:
    chunks = chunk_by_paragraph(body, id_prefix=f"{manuscript_id}:p", min_words=min_words)
    return ManuscriptDocument(id=manuscript_id, title=title, body=body, chunks=tuple(chunks))
