"""Meaning-inverting query perturbations and rank-shift accounting.

Four substitution kinds: antonym swaps for adjectives, color swaps against
the whole color table or only colors the dataset mentions, and size-word
swaps between a large and a small class. Substitutions are word-for-word,
mirror the casing of the replaced token, and leave every other byte of the
query untouched, so the perturbed text has exactly as many tokens as the
original.
"""

from __future__ import annotations

import enum
import hashlib
import math
import random
from dataclasses import dataclass

from .errors import (
    EmptyTextError,
    MissingQueryError,
    NoDistantColorError,
)
from .ranker import RankResult, cosine_similarity
from .text import word_spans, word_tokens
from .types import EmbeddingMatrix, QueryRecord
from .wordnet import SynsetGraph


class PerturbationKind(enum.Enum):
    ANTONYM = "antonym"
    COLOR_ALL = "color-all"
    COLOR_IN = "color-in"
    SIZE = "size"


SIZE_LARGE = ("large", "big", "enormous", "huge")
SIZE_SMALL = ("small", "little", "minor", "tiny")

DEFAULT_COLOR_THRESHOLD = 150.0


@dataclass(frozen=True)
class PerturbationSpec:
    """Everything a perturbation kind may need, bundled once."""

    graph: SynsetGraph | None = None
    colors: dict[str, tuple[int, int, int]] | None = None
    color_threshold: float = DEFAULT_COLOR_THRESHOLD
    dataset_colors: frozenset[str] | None = None
    seed: int = 0


@dataclass(frozen=True)
class Substitution:
    position: int  # word-token index of the first replaced token
    old: str
    new: str


@dataclass(frozen=True)
class PerturbedQuery:
    query_id: str
    original_text: str
    perturbed_text: str
    substitutions: tuple[Substitution, ...]

    def __post_init__(self) -> None:
        if not self.substitutions:
            raise ValueError("a perturbed query needs at least one substitution")
        n_old = len(word_tokens(self.original_text))
        n_new = len(word_tokens(self.perturbed_text))
        if n_old != n_new:
            raise ValueError(f"token count changed: {n_old} -> {n_new}")


def _rng_for(seed: int, query_id: str) -> random.Random:
    # stable across processes and platforms, unlike hash()
    digest = hashlib.blake2b(
        query_id.encode("utf-8"),
        digest_size=16,
        key=seed.to_bytes(8, "little", signed=True),
    ).digest()
    return random.Random(int.from_bytes(digest, "little"))


def _mirror_case(original: str, replacement: str) -> str:
    if len(original) > 1 and original.isupper():
        return replacement.upper()
    if original[:1].isupper():
        return replacement.capitalize()
    return replacement


def color_distance(a: tuple[int, int, int], b: tuple[int, int, int]) -> float:
    """Euclidean distance in RGB space."""
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def _apply(query: QueryRecord, picks: list[tuple[int, int, int, str, str]]) -> PerturbedQuery:
    """Rebuild the text with the chosen spans replaced.

    picks: (char_start, char_end, token_position, old_text, new_lower).
    """
    out = []
    cursor = 0
    subs = []
    for start, end, pos, old, new_lower in picks:
        out.append(query.text[cursor:start])
        out.append(_mirror_case(old, new_lower))
        cursor = end
        subs.append(Substitution(position=pos, old=old, new=new_lower))
    out.append(query.text[cursor:])
    return PerturbedQuery(
        query_id=query.query_id,
        original_text=query.text,
        perturbed_text="".join(out),
        substitutions=tuple(subs),
    )


def _color_mentions(
    spans: list[tuple[int, int, str]], names_by_len: list[tuple[tuple[str, ...], str]], text: str
) -> list[tuple[int, int, int, str, str]]:
    """Greedy longest-first scan for color-name mentions.

    Multi-token names must be separated by whitespace only in the text.
    Returns (char_start, char_end, token_position, mention_text, name).
    """
    lowered = [tok.lower() for _, _, tok in spans]
    mentions = []
    i = 0
    while i < len(spans):
        hit = None
        for name_tokens, name in names_by_len:
            k = len(name_tokens)
            if lowered[i : i + k] != list(name_tokens):
                continue
            gaps_ok = all(
                text[spans[j][1] : spans[j + 1][0]].isspace() for j in range(i, i + k - 1)
            )
            if gaps_ok:
                hit = (k, name)
                break
        if hit is None:
            i += 1
            continue
        k, name = hit
        start = spans[i][0]
        end = spans[i + k - 1][1]
        mentions.append((start, end, i, text[start:end], name))
        i += k
    return mentions


def _perturb_colors(
    query: QueryRecord, spec: PerturbationSpec, restrict: frozenset[str] | None
) -> PerturbedQuery | None:
    if spec.colors is None:
        raise ValueError("color perturbations need a color table")
    spans = word_spans(query.text)
    if not spans:
        raise EmptyTextError(f"query {query.query_id!r} has no tokens")
    names_by_len = sorted(
        ((tuple(name.split(" ")), name) for name in spec.colors),
        key=lambda item: (-len(item[0]), item[1]),
    )
    mentions = _color_mentions(spans, names_by_len, query.text)
    if not mentions:
        return None
    rng = _rng_for(spec.seed, query.query_id)
    picks = []
    for start, end, pos, mention_text, name in mentions:
        rgb = spec.colors[name]
        n_tokens = len(name.split(" "))
        candidates = sorted(
            other
            for other, other_rgb in spec.colors.items()
            if len(other.split(" ")) == n_tokens
            and color_distance(rgb, other_rgb) >= spec.color_threshold
            and (restrict is None or other in restrict)
        )
        if not candidates:
            raise NoDistantColorError(
                f"query {query.query_id!r}: no replacement for {name!r} at distance "
                f">= {spec.color_threshold}"
            )
        picks.append((start, end, pos, mention_text, rng.choice(candidates)))
    return _apply(query, picks)


def _perturb_antonyms(query: QueryRecord, spec: PerturbationSpec) -> PerturbedQuery | None:
    if spec.graph is None:
        raise ValueError("antonym perturbation needs a synset graph")
    spans = word_spans(query.text)
    if not spans:
        raise EmptyTextError(f"query {query.query_id!r} has no tokens")
    rng = _rng_for(spec.seed, query.query_id)
    picks = []
    for pos, (start, end, token) in enumerate(spans):
        antonyms = spec.graph.antonyms_of(token.lower())
        if antonyms:
            picks.append((start, end, pos, token, rng.choice(sorted(antonyms))))
    if not picks:
        return None
    return _apply(query, picks)


def _perturb_sizes(query: QueryRecord, spec: PerturbationSpec) -> PerturbedQuery | None:
    spans = word_spans(query.text)
    if not spans:
        raise EmptyTextError(f"query {query.query_id!r} has no tokens")
    rng = _rng_for(spec.seed, query.query_id)
    picks = []
    for pos, (start, end, token) in enumerate(spans):
        lower = token.lower()
        if lower in SIZE_LARGE:
            picks.append((start, end, pos, token, rng.choice(SIZE_SMALL)))
        elif lower in SIZE_SMALL:
            picks.append((start, end, pos, token, rng.choice(SIZE_LARGE)))
    if not picks:
        return None
    return _apply(query, picks)


def perturb_query(
    query: QueryRecord, kind: PerturbationKind, spec: PerturbationSpec
) -> PerturbedQuery | None:
    """Perturb one query; None when no token qualifies for the kind."""
    if kind is PerturbationKind.ANTONYM:
        return _perturb_antonyms(query, spec)
    if kind is PerturbationKind.COLOR_ALL:
        return _perturb_colors(query, spec, restrict=None)
    if kind is PerturbationKind.COLOR_IN:
        if spec.dataset_colors is None:
            raise ValueError("color-in perturbation needs the dataset color set")
        return _perturb_colors(query, spec, restrict=spec.dataset_colors)
    if kind is PerturbationKind.SIZE:
        return _perturb_sizes(query, spec)
    raise ValueError(f"unknown perturbation kind {kind!r}")


def perturb_queries(
    queries: list[QueryRecord], kind: PerturbationKind, spec: PerturbationSpec
) -> list[PerturbedQuery]:
    """Perturbed versions of every applicable query, in input order."""
    out = []
    for q in queries:
        p = perturb_query(q, kind, spec)
        if p is not None:
            out.append(p)
    return out


def applicability_stats(
    queries: list[QueryRecord], kind: PerturbationKind, spec: PerturbationSpec
) -> float:
    """Fraction of queries the kind applies to."""
    if not queries:
        return 0.0
    applicable = sum(1 for q in queries if perturb_query(q, kind, spec) is not None)
    return applicable / len(queries)


def dataset_color_names(
    queries: list[QueryRecord], colors: dict[str, tuple[int, int, int]]
) -> frozenset[str]:
    """Color-table names mentioned by at least one query."""
    names_by_len = sorted(
        ((tuple(name.split(" ")), name) for name in colors),
        key=lambda item: (-len(item[0]), item[1]),
    )
    found: set[str] = set()
    for q in queries:
        spans = word_spans(q.text)
        for *_span, name in _color_mentions(spans, names_by_len, q.text):
            found.add(name)
    return frozenset(found)


# ------------------------------------------------------------------ reranking

@dataclass(frozen=True)
class RerankDelta:
    """How ground-truth ranks moved among queries whose embedding changed."""

    n_perturbed: int
    lower_pct: float
    higher_pct: float
    same_pct: float


def changed_query_ids(
    original: EmbeddingMatrix, adversarial: EmbeddingMatrix
) -> frozenset[str]:
    """Adversarial ids whose embedding points in a new direction.

    Cosine 1 within float tolerance (identical or positively scaled rows)
    counts as unchanged.
    """
    changed = set()
    for qid in adversarial.ids:
        try:
            row = original.row(qid)
        except KeyError as exc:
            raise MissingQueryError(f"query {qid!r} missing from original embeddings") from exc
        if cosine_similarity(row, adversarial.row(qid)) < 1.0 - 1e-12:
            changed.add(qid)
    return frozenset(changed)


def rerank_delta(
    original: list[RankResult],
    adversarial: list[RankResult],
    changed_ids,
) -> RerankDelta:
    """Classify each changed query by ground-truth rank movement.

    "Lower" means the ground truth fell (rank number grew). With an empty
    changed set all percentages are 0 by convention.
    """
    orig_by_id = {r.query_id: r for r in original}
    adv_by_id = {r.query_id: r for r in adversarial}
    ids = sorted(set(changed_ids))
    lower = higher = same = 0
    for qid in ids:
        if qid not in orig_by_id or qid not in adv_by_id:
            raise MissingQueryError(f"query {qid!r} missing from a result set")
        before = orig_by_id[qid].gt_rank
        after = adv_by_id[qid].gt_rank
        if after > before:
            lower += 1
        elif after < before:
            higher += 1
        else:
            same += 1
    n = len(ids)
    if n == 0:
        return RerankDelta(0, 0.0, 0.0, 0.0)
    return RerankDelta(
        n_perturbed=n,
        lower_pct=100.0 * lower / n,
        higher_pct=100.0 * higher / n,
        same_pct=100.0 * same / n,
    )
