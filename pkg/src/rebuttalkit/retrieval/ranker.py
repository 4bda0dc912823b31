"""Top-k chunk retrieval for a reviewer comment."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyCorpus, PreconditionError
from ..model import Comment, ManuscriptChunk
from .vectors import EmbeddingCache, cosine_similarity

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 3


@dataclass(frozen=True)
class RetrievalResult:
    """Ranked evidence for one comment; ranked = ((chunk_id, score), ...)."""

    comment_id: str
    ranked: tuple[tuple[str, float], ...]
    requested_k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranked", tuple((cid, float(s)) for cid, s in self.ranked))
        scores = [s for _, s in self.ranked]
        if scores != sorted(scores, reverse=True):
            raise ValueError("ranked entries must be in non-increasing score order")
        if self.requested_k < 1:
            raise ValueError("requested_k must be >= 1")

    @property
    def chunk_ids(self) -> tuple[str, ...]:
        return tuple(cid for cid, _ in self.ranked)


def _chunk_vectors(
    chunks: Sequence[ManuscriptChunk],
    provider,
    cache: EmbeddingCache | None,
) -> list[list[float]]:
    vectors: dict[int, list[float]] = {}
    missing: list[int] = []
    for idx, chunk in enumerate(chunks):
        if chunk.embedding is not None:
            vectors[idx] = list(chunk.embedding)
        elif cache is not None:
            hit = cache.get(provider.model_id, chunk.text)
            if hit is not None:
                vectors[idx] = hit
            else:
                missing.append(idx)
        else:
            missing.append(idx)
    if missing:
        fresh = provider.embed([chunks[i].text for i in missing], stage="retrieval")
        for idx, vec in zip(missing, fresh):
            vectors[idx] = vec
            if cache is not None:
                cache.put(provider.model_id, chunks[idx].text, vec)
    return [vectors[i] for i in range(len(chunks))]


def retrieve_top_k(
    comment: Comment,
    chunks: Sequence[ManuscriptChunk],
    k: int = DEFAULT_TOP_K,
    provider=None,
    cache: EmbeddingCache | None = None,
) -> RetrievalResult:
    """Rank every chunk by cosine similarity to the comment, keep the top k.

    Ties break toward the earlier chunk ordinal, so rankings are stable
    under permutation of the input sequence. k is clamped to the corpus
    size; an empty corpus raises EmptyCorpus.
    """
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if not chunks:
        raise EmptyCorpus("no chunks to rank")
    if provider is None:
        raise PreconditionError("an embedding provider is required")
    ordered = sorted(chunks, key=lambda c: c.ordinal)
    vectors = _chunk_vectors(ordered, provider, cache)
    query = provider.embed([comment.text], stage="retrieval")[0]
    scored = [
        (chunk.ordinal, chunk.id, cosine_similarity(query, vec))
        for chunk, vec in zip(ordered, vectors)
    ]
    scored.sort(key=lambda t: (-t[2], t[0]))
    top = scored[: min(k, len(scored))]
    logger.debug("retrieval for %s: %s", comment.id, [(cid, round(s, 4)) for _, cid, s in top])
    return RetrievalResult(
        comment_id=comment.id,
        ranked=tuple((cid, score) for _, cid, score in top),
        requested_k=k,
    )
