"""Failure explanation metrics.

Each metric compares the ground-truth image annotation against the top-1
retrieved image annotation of a failed query:

- concept agreement: fraction of ground-truth concepts also retrieved
- non-common similarity: how close the disjoint concepts are in the synset
  graph, averaged over an optimal pairing
- concept enumeration: instance-count disagreement over shared categories
- size disagreement: relative box-area mismatch over optimally paired
  instances of shared categories
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGroundTruthError, EmptyInputError
from .matching import max_weight_full_matching, min_weight_full_matching
from .types import FailureRecord, ImageAnnotation
from .wordnet import SynsetGraph

DEFAULT_SIZE_THRESHOLD = 1.0


def concept_agreement(gt: ImageAnnotation, rt: ImageAnnotation) -> float:
    """|V(gt) ∩ V(rt)| / |V(gt)| over distinct synsets."""
    gt_set = gt.concept_set()
    if not gt_set:
        raise EmptyGroundTruthError(f"image {gt.image_id!r} has no concept annotations")
    return len(gt_set & rt.concept_set()) / len(gt_set)


def non_common_similarity(
    gt: ImageAnnotation, rt: ImageAnnotation, graph: SynsetGraph
) -> tuple[float | None, tuple[tuple[str, str, float], ...]]:
    """Average path similarity over a maximum-weight pairing of the
    concepts unique to each side.

    Returns (None, ()) when either side has no unique concepts. Unreachable
    synset pairs contribute weight 0. The second element lists the chosen
    (gt_synset, rt_synset, similarity) pairs.
    """
    gt_only = sorted(gt.concept_set() - rt.concept_set())
    rt_only = sorted(rt.concept_set() - gt.concept_set())
    if not gt_only or not rt_only:
        return None, ()
    weights = np.zeros((len(gt_only), len(rt_only)), dtype=np.float64)
    for i, a in enumerate(gt_only):
        for j, b in enumerate(rt_only):
            ps = graph.path_similarity(a, b)
            weights[i, j] = 0.0 if ps is None else ps
    matching = max_weight_full_matching(weights)
    ncs = matching.total / min(len(gt_only), len(rt_only))
    pairs = tuple((gt_only[l], rt_only[r], float(weights[l, r])) for l, r in matching.pairs)
    return ncs, pairs


def concept_enumeration(gt: ImageAnnotation, rt: ImageAnnotation) -> int:
    """Sum of |count_gt - count_rt| over categories present in both images."""
    gt_counts = gt.multiset()
    rt_counts = rt.multiset()
    return sum(abs(gt_counts[c] - rt_counts[c]) for c in gt_counts.keys() & rt_counts.keys())


@dataclass(frozen=True)
class SizeDisagreement:
    """Outcome of pairing same-category instances by relative box area.

    binary_count of the match_count optimal pairs exceeded the threshold;
    sd_avg is their ratio (None when no category is shared). sd_optimistic
    sums each shared category's mean relative-area difference instead of
    thresholding.
    """

    binary_count: int
    match_count: int
    sd_avg: float | None
    sd_optimistic: float


def size_disagreement(
    gt: ImageAnnotation, rt: ImageAnnotation, threshold: float = DEFAULT_SIZE_THRESHOLD
) -> SizeDisagreement:
    """Pair same-category instances to minimize relative area difference.

    The difference of two relative areas a, b is |a - b| / min(a, b); a pair
    is a binary hit when that reaches the threshold.
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    common = sorted(gt.multiset().keys() & rt.multiset().keys())
    binary = 0
    count = 0
    optimistic = 0.0
    for category in common:
        gt_areas = gt.relative_areas(category)
        rt_areas = rt.relative_areas(category)
        diff = np.empty((len(gt_areas), len(rt_areas)), dtype=np.float64)
        for i, a in enumerate(gt_areas):
            for j, b in enumerate(rt_areas):
                diff[i, j] = abs(a - b) / min(a, b)
        matching = min_weight_full_matching(diff)
        for l, r in matching.pairs:
            if diff[l, r] >= threshold:
                binary += 1
        count += len(matching.pairs)
        optimistic += matching.total / len(matching.pairs)
    return SizeDisagreement(
        binary_count=binary,
        match_count=count,
        sd_avg=(binary / count) if count else None,
        sd_optimistic=optimistic,
    )


@dataclass(frozen=True)
class FailureExplanation:
    query_id: str
    gt_image_id: str
    retrieved_image_id: str
    gt_rank: int
    ca: float
    ncs: float | None
    ncs_pairs: tuple[tuple[str, str, float], ...]
    ce: int
    sd: SizeDisagreement


def explain_failure(
    failure: FailureRecord,
    annotations: dict[str, ImageAnnotation],
    graph: SynsetGraph,
    threshold: float = DEFAULT_SIZE_THRESHOLD,
) -> FailureExplanation:
    """All four metrics for one failed query."""
    for image_id in (failure.gt_image_id, failure.retrieved_image_id):
        if image_id not in annotations:
            raise ValueError(f"no annotation for image {image_id!r}")
    gt = annotations[failure.gt_image_id]
    rt = annotations[failure.retrieved_image_id]
    ncs, ncs_pairs = non_common_similarity(gt, rt, graph)
    return FailureExplanation(
        query_id=failure.query_id,
        gt_image_id=failure.gt_image_id,
        retrieved_image_id=failure.retrieved_image_id,
        gt_rank=failure.gt_rank,
        ca=concept_agreement(gt, rt),
        ncs=ncs,
        ncs_pairs=ncs_pairs,
        ce=concept_enumeration(gt, rt),
        sd=size_disagreement(gt, rt, threshold),
    )


def explain_all(
    failures: list[FailureRecord],
    annotations: dict[str, ImageAnnotation],
    graph: SynsetGraph,
    threshold: float = DEFAULT_SIZE_THRESHOLD,
    jobs: int = 1,
) -> list[FailureExplanation]:
    """explain_failure over a failure set, in input order."""
    if jobs > 1 and len(failures) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(
                pool.map(lambda f: explain_failure(f, annotations, graph, threshold), failures)
            )
    return [explain_failure(f, annotations, graph, threshold) for f in failures]


@dataclass(frozen=True)
class GlobalReport:
    """Failure metrics aggregated over the whole failure set."""

    n_failures: int
    avg_ca: float
    avg_ncs: float | None
    ce_mode: int
    ce_avg: float
    avg_sd: float | None
    obj_hit: int
    obj_miss: int
    matched_synset_pct: float
    avg_enum_disagreement_pct: float


def aggregate(
    explanations: list[FailureExplanation], annotations: dict[str, ImageAnnotation]
) -> GlobalReport:
    """Average the per-failure metrics and count instance-level hits.

    obj_hit counts ground-truth instances matched per category (the smaller
    of the two counts); obj_miss counts the remaining ground-truth
    instances. NCS and SD averages skip failures where the metric is
    undefined. The CE mode resolves ties toward the smaller value.
    """
    if not explanations:
        raise EmptyInputError("aggregate needs at least one explanation")
    ca_vals = []
    ncs_vals = []
    ce_vals = []
    sd_vals = []
    obj_hit = 0
    obj_miss = 0
    common_total = 0
    gt_concept_total = 0
    enum_pcts = []
    for ex in explanations:
        gt = annotations[ex.gt_image_id]
        rt = annotations[ex.retrieved_image_id]
        ca_vals.append(ex.ca)
        if ex.ncs is not None:
            ncs_vals.append(ex.ncs)
        ce_vals.append(ex.ce)
        if ex.sd.sd_avg is not None:
            sd_vals.append(ex.sd.sd_avg)
        gt_counts = gt.multiset()
        rt_counts = rt.multiset()
        common = gt_counts.keys() & rt_counts.keys()
        hit = sum(min(gt_counts[c], rt_counts[c]) for c in common)
        obj_hit += hit
        obj_miss += sum(gt_counts.values()) - hit
        common_total += len(common)
        gt_concept_total += len(gt_counts)
        disagreeing = sum(1 for c in common if gt_counts[c] != rt_counts[c])
        enum_pcts.append(100.0 * disagreeing / len(gt_counts))
    ce_counter = Counter(ce_vals)
    top = max(ce_counter.values())
    ce_mode = min(v for v, c in ce_counter.items() if c == top)
    return GlobalReport(
        n_failures=len(explanations),
        avg_ca=float(np.mean(ca_vals)),
        avg_ncs=float(np.mean(ncs_vals)) if ncs_vals else None,
        ce_mode=ce_mode,
        ce_avg=float(np.mean(ce_vals)),
        avg_sd=float(np.mean(sd_vals)) if sd_vals else None,
        obj_hit=obj_hit,
        obj_miss=obj_miss,
        matched_synset_pct=100.0 * common_total / gt_concept_total,
        avg_enum_disagreement_pct=float(np.mean(enum_pcts)),
    )
