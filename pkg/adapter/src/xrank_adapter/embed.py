"""Sentence embeddings for queries and corpora.

The encoder is any object with an encode(texts, batch_size=...) method
returning one vector per text; in production that is a SentenceTransformer,
in tests a deterministic stand-in.  Everything downstream only sees the
matrix, so the split keeps model weights out of the test path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, ModelLoadError
from .formats import CorpusRow, PerturbedRow, QueryRow


@dataclass(frozen=True)
class ModelSpec:
    """Which encoder to load and how to run it."""

    name: str
    batch_size: int = 32
    device: str | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("model name must be non-empty")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")

    def load(self):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ModelLoadError(
                f"cannot load {self.name!r}: sentence-transformers is not installed "
                "(install the 'models' extra)"
            ) from exc
        try:
            return SentenceTransformer(self.name, device=self.device)
        except Exception as exc:
            raise ModelLoadError(f"cannot load {self.name!r}: {exc}") from exc


def _encode(encoder, texts: list[str], batch_size: int) -> np.ndarray:
    raw = encoder.encode(texts, batch_size=batch_size)
    matrix = np.asarray(raw, dtype=np.float32)
    if matrix.ndim != 2 or matrix.shape[0] != len(texts):
        raise ValueError(
            f"encoder returned shape {matrix.shape} for {len(texts)} texts"
        )
    if matrix.shape[1] == 0:
        raise ValueError("encoder returned zero-dimensional vectors")
    return matrix


def embed_queries(
    queries: list[QueryRow] | list[PerturbedRow], encoder, batch_size: int = 32
) -> tuple[list[str], np.ndarray]:
    """One vector per query text, in input order."""
    if not queries:
        raise EmptyInputError("no queries to embed")
    texts = [q.text for q in queries]
    return [q.query_id for q in queries], _encode(encoder, texts, batch_size)


def embed_corpora(
    corpora: list[CorpusRow], encoder, batch_size: int = 32
) -> tuple[list[str], np.ndarray]:
    """One vector per corpus record: the mean of its sentence vectors.

    All sentences are encoded in one pass so batching stays effective for
    records with few sentences.  The mean is taken in float64 and cast
    back, which makes a record with one sentence repeated k times come out
    identical to the single-sentence record.
    """
    if not corpora:
        raise EmptyInputError("no corpus records to embed")
    # encode each distinct sentence once: identical sentences then share one
    # vector no matter which record or batch they land in
    unique: dict[str, int] = {}
    for row in corpora:
        for sentence in row.sentences:
            unique.setdefault(sentence, len(unique))
    flat = _encode(encoder, list(unique), batch_size)
    dim = flat.shape[1]
    rows = np.empty((len(corpora), dim), dtype=np.float32)
    for i, row in enumerate(corpora):
        block = flat[[unique[s] for s in row.sentences]]
        if (block == block[0]).all():
            # the mean of identical vectors is that vector, exactly; going
            # through float64 could disturb the last bit
            rows[i] = block[0]
        else:
            rows[i] = block.astype(np.float64).mean(axis=0).astype(np.float32)
    return [row.image_id for row in corpora], rows
