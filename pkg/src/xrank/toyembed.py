"""Hashed bag-of-tokens embeddings for offline pipelines and tests.

Each sentence becomes a token-count vector over dim hash buckets,
L2-normalized; a multi-sentence document is the mean of its sentence
vectors. The bucket hash is keyed by the seed and stable across platforms
and processes.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .errors import EmptyTextError
from .text import word_tokens
from .types import CorpusRecord, EmbeddingMatrix, QueryRecord

DEFAULT_DIM = 256


class ToyEmbedder:
    def __init__(self, dim: int = DEFAULT_DIM, seed: int = 0):
        if dim < 1:
            raise ValueError(f"dim must be positive, got {dim}")
        self.dim = dim
        self.seed = seed
        self._key = seed.to_bytes(8, "little", signed=True)

    def _bucket(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=self._key).digest()
        return int.from_bytes(digest, "little") % self.dim

    def embed_sentence(self, text: str) -> np.ndarray:
        tokens = [t.lower() for t in word_tokens(text)]
        if not tokens:
            raise EmptyTextError(f"no tokens in {text!r}")
        vec = np.zeros(self.dim, dtype=np.float64)
        for token in tokens:
            vec[self._bucket(token)] += 1.0
        return vec / np.linalg.norm(vec)

    def embed_document(self, sentences: list[str]) -> np.ndarray:
        if not sentences:
            raise EmptyTextError("no sentences to embed")
        return np.mean([self.embed_sentence(s) for s in sentences], axis=0)

    def embed_texts(self, ids: list[str], texts: list[str]) -> EmbeddingMatrix:
        rows = np.stack([self.embed_sentence(t) for t in texts]) if ids else np.zeros((0, self.dim))
        return EmbeddingMatrix(tuple(ids), rows)

    def embed_queries(self, queries: list[QueryRecord]) -> EmbeddingMatrix:
        return self.embed_texts([q.query_id for q in queries], [q.text for q in queries])

    def embed_corpora(self, corpora: list[CorpusRecord]) -> EmbeddingMatrix:
        rows = (
            np.stack([self.embed_document(list(c.sentences)) for c in corpora])
            if corpora
            else np.zeros((0, self.dim))
        )
        return EmbeddingMatrix(tuple(c.image_id for c in corpora), rows)
