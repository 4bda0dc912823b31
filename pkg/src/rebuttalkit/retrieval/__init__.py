"""Manuscript chunking, similarity and top-k evidence retrieval."""

from .chunking import MIN_PARAGRAPH_WORDS, build_manuscript, chunk_by_paragraph, paragraphs
from .ranker import DEFAULT_TOP_K, RetrievalResult, retrieve_top_k
from .vectors import EmbeddingCache, cosine_similarity

__all__ = [
    "DEFAULT_TOP_K",
    "MIN_PARAGRAPH_WORDS",
    "EmbeddingCache",
    "RetrievalResult",
    "build_manuscript",
    "chunk_by_paragraph",
    "cosine_similarity",
    "paragraphs",
    "retrieve_top_k",
]
