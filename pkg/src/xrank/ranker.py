"""Query-to-corpus ranking by cosine similarity."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatchError, EmptyInputError, MissingQueryError, ZeroNormError
from .types import EmbeddingMatrix, FailureRecord, QueryRecord

_BLOCK = 256


def cosine_similarity(u, v) -> float:
    """Cosine of the angle between two vectors, computed in float64."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimMismatchError(f"expected equal-length vectors, got {a.shape} and {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroNormError("cosine similarity is undefined for zero vectors")
    return float(np.dot(a, b) / (na * nb))


@dataclass(frozen=True)
class RankResult:
    """One query's full candidate ordering, best match first."""

    query_id: str
    gt_image_id: str
    gt_rank: int
    candidates: tuple[str, ...]

    @property
    def top1_id(self) -> str:
        return self.candidates[0]


@dataclass(frozen=True)
class RankSummary:
    n_queries: int
    recall_at: dict[int, float]
    mrr_at: dict[int, float]
    median_rank: int
    fail_fraction: float
    failures: tuple[FailureRecord, ...]


def rank_all(
    queries: list[QueryRecord],
    query_embeddings: EmbeddingMatrix,
    corpus_embeddings: EmbeddingMatrix,
    jobs: int = 1,
) -> list[RankResult]:
    """Rank every corpus entry for every query.

    Similarities are computed blockwise in float64; equal similarities are
    broken by ascending corpus id, so the output is a pure function of the
    inputs regardless of jobs.
    """
    if query_embeddings.dim != corpus_embeddings.dim:
        raise DimMismatchError(
            f"query dim {query_embeddings.dim} != corpus dim {corpus_embeddings.dim}"
        )
    corpus_ids = np.array(corpus_embeddings.ids)
    corpus_index = {cid: k for k, cid in enumerate(corpus_embeddings.ids)}
    for q in queries:
        if q.query_id not in query_embeddings._index:  # type: ignore[attr-defined]
            raise MissingQueryError(f"no embedding row for query {q.query_id!r}")
        if q.image_id not in corpus_index:
            raise MissingQueryError(
                f"query {q.query_id!r}: ground truth {q.image_id!r} not in corpus"
            )

    corpus = corpus_embeddings.rows.astype(np.float64)
    corpus /= np.linalg.norm(corpus, axis=1, keepdims=True)
    # tie-break key: position of each corpus id in ascending id order
    id_rank = np.empty(len(corpus_ids), dtype=np.int64)
    id_rank[np.argsort(corpus_ids)] = np.arange(len(corpus_ids))

    def rank_block(block: list[QueryRecord]) -> list[RankResult]:
        rows = np.stack([query_embeddings.row(q.query_id) for q in block]).astype(np.float64)
        rows /= np.linalg.norm(rows, axis=1, keepdims=True)
        sims = rows @ corpus.T
        out = []
        for q, sim_row in zip(block, sims):
            order = np.lexsort((id_rank, -sim_row))
            gt_pos = int(np.nonzero(order == corpus_index[q.image_id])[0][0]) + 1
            out.append(
                RankResult(
                    query_id=q.query_id,
                    gt_image_id=q.image_id,
                    gt_rank=gt_pos,
                    candidates=tuple(corpus_ids[order]),
                )
            )
        return out

    blocks = [queries[i : i + _BLOCK] for i in range(0, len(queries), _BLOCK)]
    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            ranked = list(pool.map(rank_block, blocks))
    else:
        ranked = [rank_block(b) for b in blocks]
    return [r for block in ranked for r in block]


def summarize(results: list[RankResult], ks: list[int] | None = None) -> RankSummary:
    """Recall@k, MRR@k, median rank, and the failure set.

    MRR@k counts a query only when its ground truth ranks within the top k.
    The median of an even-sized rank list is the lower of the two middles.
    """
    if not results:
        raise EmptyInputError("summarize needs at least one rank result")
    n = len(results)
    if ks is None:
        ks = [1, 5, 10, n]
    ks = sorted(set(ks))
    if any(k < 1 for k in ks):
        raise ValueError(f"ks must be positive, got {ks}")
    ranks = [r.gt_rank for r in results]
    recall_at = {k: sum(1 for r in ranks if r <= k) / n for k in ks}
    # fsum keeps the mean exactly rounded, independent of accumulation order
    mrr_at = {k: math.fsum(1.0 / r for r in ranks if r <= k) / n for k in ks}
    median_rank = sorted(ranks)[(n - 1) // 2]
    failures = tuple(
        FailureRecord(r.query_id, r.gt_image_id, r.top1_id, r.gt_rank)
        for r in results
        if r.gt_rank >= 2
    )
    return RankSummary(
        n_queries=n,
        recall_at=recall_at,
        mrr_at=mrr_at,
        median_rank=median_rank,
        fail_fraction=len(failures) / n,
        failures=failures,
    )
