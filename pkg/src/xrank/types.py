"""Core record types and dataset-level validation.

Everything downstream (ranking, explanation, perturbation) consumes these
types; they validate eagerly so later stages can assume well-formed data.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicateIdError, ZeroNormError

# lemma.pos.NN where pos is one of n/v/a/r/s and lemma is lowercase
_SYNSET_ID_RE = re.compile(r"^[^A-Z\s]+\.[nvars]\.\d{2}$")


def is_valid_synset_id(value: str) -> bool:
    return bool(_SYNSET_ID_RE.match(value))


def validate_synset_id(value: str) -> str:
    if not is_valid_synset_id(value):
        raise ValueError(f"not a valid synset id: {value!r}")
    return value


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in pixel coordinates, (x, y) top-left, w/h extents."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        if self.x < 0 or self.y < 0:
            raise ValueError(f"box origin must be non-negative, got ({self.x}, {self.y})")
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"box extents must be positive, got ({self.w}, {self.h})")

    def area(self) -> float:
        return self.w * self.h


@dataclass(frozen=True)
class ConceptInstance:
    """One localized concept: a synset id plus its box."""

    synset: str
    box: BoundingBox

    def __post_init__(self) -> None:
        validate_synset_id(self.synset)


@dataclass(frozen=True)
class ImageAnnotation:
    """All concept instances of one image."""

    image_id: str
    width: int
    height: int
    instances: tuple[ConceptInstance, ...]

    def __post_init__(self) -> None:
        if not self.image_id:
            raise ValueError("image_id must be non-empty")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image extents must be positive, got {self.width}x{self.height}")

    def concept_set(self) -> frozenset[str]:
        """Distinct synsets present in the image."""
        return frozenset(inst.synset for inst in self.instances)

    def multiset(self) -> dict[str, int]:
        """Synset -> instance count."""
        return dict(Counter(inst.synset for inst in self.instances))

    def instances_of(self, synset: str) -> tuple[ConceptInstance, ...]:
        return tuple(inst for inst in self.instances if inst.synset == synset)

    def relative_areas(self, synset: str) -> tuple[float, ...]:
        """Box areas of one category, each divided by the image area."""
        image_area = float(self.width) * float(self.height)
        return tuple(inst.box.area() / image_area for inst in self.instances_of(synset))


@dataclass(frozen=True)
class QueryRecord:
    query_id: str
    image_id: str
    text: str

    def __post_init__(self) -> None:
        if not self.query_id or not self.image_id:
            raise ValueError("query_id and image_id must be non-empty")
        if not self.text.strip():
            raise ValueError(f"query {self.query_id}: text must be non-empty")


@dataclass(frozen=True)
class CorpusRecord:
    image_id: str
    sentences: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.image_id:
            raise ValueError("image_id must be non-empty")
        if not self.sentences:
            raise ValueError(f"corpus {self.image_id}: needs at least one sentence")
        if any(not s.strip() for s in self.sentences):
            raise ValueError(f"corpus {self.image_id}: sentences must be non-empty")


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Id-keyed embedding rows.

    Rows are stored float32 exactly as on disk; math elsewhere upcasts to
    float64. Construction rejects duplicate ids, non-finite values, and
    zero-norm rows.
    """

    ids: tuple[str, ...]
    rows: np.ndarray

    def __post_init__(self) -> None:
        if self.rows.ndim != 2:
            raise ValueError(f"rows must be 2-D, got shape {self.rows.shape}")
        if len(self.ids) != self.rows.shape[0]:
            raise ValueError(f"{len(self.ids)} ids for {self.rows.shape[0]} rows")
        if len(set(self.ids)) != len(self.ids):
            seen: set[str] = set()
            for i in self.ids:
                if i in seen:
                    raise DuplicateIdError(f"duplicate embedding id: {i!r}")
                seen.add(i)
        if self.rows.dtype != np.float32:
            object.__setattr__(self, "rows", self.rows.astype(np.float32))
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("embedding rows must be finite")
        norms = np.linalg.norm(self.rows.astype(np.float64), axis=1)
        bad = np.nonzero(norms == 0.0)[0]
        if bad.size:
            raise ZeroNormError(f"zero-norm embedding row for id {self.ids[bad[0]]!r}")
        object.__setattr__(self, "_index", {i: k for k, i in enumerate(self.ids)})

    @property
    def dim(self) -> int:
        return int(self.rows.shape[1])

    def __len__(self) -> int:
        return len(self.ids)

    def index_of(self, id_: str) -> int:
        return self._index[id_]  # type: ignore[attr-defined]

    def row(self, id_: str) -> np.ndarray:
        return self.rows[self.index_of(id_)]


@dataclass(frozen=True)
class FailureRecord:
    """A query whose ground-truth image was not ranked first."""

    query_id: str
    gt_image_id: str
    retrieved_image_id: str
    gt_rank: int

    def __post_init__(self) -> None:
        if self.gt_rank < 2:
            raise ValueError(f"failure requires gt_rank >= 2, got {self.gt_rank}")


# defect kinds reported by validate_dataset
DANGLING_GROUND_TRUTH = "DanglingGroundTruth"
DUPLICATE_ID = "DuplicateId"
DIM_MISMATCH = "DimMismatch"
MISSING_EMBEDDING = "MissingEmbedding"
UNKNOWN_EMBEDDING_ID = "UnknownEmbeddingId"


@dataclass(frozen=True)
class Defect:
    kind: str
    subject: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    defects: tuple[Defect, ...] = field(default_factory=tuple)


def validate_dataset(
    annotations: list[ImageAnnotation],
    queries: list[QueryRecord],
    corpora: list[CorpusRecord],
    query_embeddings: EmbeddingMatrix | None = None,
    corpus_embeddings: EmbeddingMatrix | None = None,
) -> ValidationReport:
    """Cross-reference every input and report each broken link.

    Collects all defects instead of stopping at the first; ok is true iff
    none were found.
    """
    defects: list[Defect] = []

    def dupes(ids: list[str], what: str) -> set[str]:
        seen: set[str] = set()
        out: set[str] = set()
        for i in ids:
            if i in seen:
                defects.append(Defect(DUPLICATE_ID, i, f"duplicate {what}"))
                out.add(i)
            seen.add(i)
        return seen

    ann_ids = dupes([a.image_id for a in annotations], "annotation image_id")
    query_ids = dupes([q.query_id for q in queries], "query_id")
    corpus_ids = dupes([c.image_id for c in corpora], "corpus image_id")

    for q in queries:
        if q.image_id not in ann_ids:
            defects.append(
                Defect(DANGLING_GROUND_TRUTH, q.query_id, f"no annotation for image {q.image_id}")
            )
        if q.image_id not in corpus_ids:
            defects.append(
                Defect(DANGLING_GROUND_TRUTH, q.query_id, f"no corpus entry for image {q.image_id}")
            )

    def check_matrix(matrix: EmbeddingMatrix | None, record_ids: set[str], what: str) -> None:
        if matrix is None:
            return
        matrix_ids = set(matrix.ids)
        for i in sorted(matrix_ids - record_ids):
            defects.append(Defect(UNKNOWN_EMBEDDING_ID, i, f"embedding row without {what} record"))
        for i in sorted(record_ids - matrix_ids):
            defects.append(Defect(MISSING_EMBEDDING, i, f"{what} record without embedding row"))

    check_matrix(query_embeddings, query_ids, "query")
    check_matrix(corpus_embeddings, corpus_ids, "corpus")

    if (
        query_embeddings is not None
        and corpus_embeddings is not None
        and query_embeddings.dim != corpus_embeddings.dim
    ):
        defects.append(
            Defect(
                DIM_MISMATCH,
                "embeddings",
                f"query dim {query_embeddings.dim} != corpus dim {corpus_embeddings.dim}",
            )
        )

    return ValidationReport(ok=not defects, defects=tuple(defects))
