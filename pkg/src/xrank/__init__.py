"""Ranking, failure explanation, and adversarial probing for text-image retrieval."""

__version__ = "0.1.0"

from .adversarial import (
    DEFAULT_COLOR_THRESHOLD,
    PerturbationKind,
    PerturbationSpec,
    PerturbedQuery,
    RerankDelta,
    Substitution,
    changed_query_ids,
    dataset_color_names,
    perturb_queries,
    perturb_query,
    rerank_delta,
)
from .explain import (
    DEFAULT_SIZE_THRESHOLD,
    FailureExplanation,
    GlobalReport,
    SizeDisagreement,
    aggregate,
    concept_agreement,
    concept_enumeration,
    explain_all,
    explain_failure,
    non_common_similarity,
    size_disagreement,
)
from .matching import Matching, max_weight_full_matching, min_weight_full_matching
from .ranker import RankResult, RankSummary, cosine_similarity, rank_all, summarize
from .rules import HumanLabelRecord, LabelDistribution, Rule, label_distribution, mine_rules
from .toyembed import ToyEmbedder
from .types import (
    BoundingBox,
    ConceptInstance,
    CorpusRecord,
    EmbeddingMatrix,
    FailureRecord,
    ImageAnnotation,
    QueryRecord,
    ValidationReport,
    validate_dataset,
)
from .wordnet import SynsetGraph

__all__ = [
    "BoundingBox",
    "ConceptInstance",
    "CorpusRecord",
    "DEFAULT_COLOR_THRESHOLD",
    "DEFAULT_SIZE_THRESHOLD",
    "EmbeddingMatrix",
    "FailureExplanation",
    "FailureRecord",
    "GlobalReport",
    "HumanLabelRecord",
    "ImageAnnotation",
    "LabelDistribution",
    "Matching",
    "PerturbationKind",
    "PerturbationSpec",
    "PerturbedQuery",
    "QueryRecord",
    "RankResult",
    "RankSummary",
    "RerankDelta",
    "Rule",
    "SizeDisagreement",
    "Substitution",
    "SynsetGraph",
    "ToyEmbedder",
    "ValidationReport",
    "aggregate",
    "changed_query_ids",
    "concept_agreement",
    "concept_enumeration",
    "cosine_similarity",
    "dataset_color_names",
    "explain_all",
    "explain_failure",
    "label_distribution",
    "max_weight_full_matching",
    "min_weight_full_matching",
    "mine_rules",
    "non_common_similarity",
    "perturb_queries",
    "perturb_query",
    "rank_all",
    "rerank_delta",
    "size_disagreement",
    "summarize",
    "validate_dataset",
]
