"""Cosine similarity and the on-disk embedding cache."""

from __future__ import annotations

import math
import os
import struct
import tempfile
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch
from ..util import sha256_hex

MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sI8x")  # magic, dim, 8 reserved bytes = 16 total


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine of the angle between two vectors; 0.0 when either has zero norm."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.ndim != 1 or vb.ndim != 1 or va.size == 0 or vb.size == 0:
        raise DimensionMismatch("vectors must be non-empty and one-dimensional")
    if va.shape != vb.shape:
        raise DimensionMismatch(f"dimension mismatch: {va.size} vs {vb.size}")
    if not (np.isfinite(va).all() and np.isfinite(vb).all()):
        raise ValueError("vectors must be finite")
    norm = float(np.linalg.norm(va)) * float(np.linalg.norm(vb))
    if norm == 0.0:
        return 0.0
    value = float(np.dot(va, vb) / norm)
    # numeric noise can push |cos| infinitesimally past 1
    return max(-1.0, min(1.0, value))


class EmbeddingCache:
    """Per-(model, text) vectors as little-endian float32 files.

    File layout: 16-byte header (4-byte magic, uint32 dimension, 8 reserved
    bytes) followed by dim float32 values. Writes go through a temp file and
    an atomic rename so concurrent readers never see a torn vector.
    """

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, model_id: str, text: str) -> Path:
        return self.root / (sha256_hex(f"{model_id}\x00{sha256_hex(text)}") + ".vec")

    def get(self, model_id: str, text: str) -> list[float] | None:
        path = self._path(model_id, text)
        try:
            blob = path.read_bytes()
        except OSError:
            return None
        if len(blob) < _HEADER.size:
            return None
        magic, dim = _HEADER.unpack_from(blob)
        if magic != MAGIC or len(blob) != _HEADER.size + 4 * dim:
            return None
        values = struct.unpack_from(f"<{dim}f", blob, _HEADER.size)
        vec = [float(x) for x in values]
        return vec if all(math.isfinite(x) for x in vec) else None

    def put(self, model_id: str, text: str, vector: Sequence[float]) -> None:
        vec = [float(x) for x in vector]
        if not vec or not all(math.isfinite(x) for x in vec):
            raise ValueError("vector must be non-empty and finite")
        blob = _HEADER.pack(MAGIC, len(vec)) + struct.pack(f"<{len(vec)}f", *vec)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(blob)
            os.replace(tmp, self._path(model_id, text))
        except OSError:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
