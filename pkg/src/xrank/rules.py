"""Human failure labels: distribution statistics and pairwise rule mining."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicateIdError, EmptyInputError, ParseError

LABELS = (
    "object_class",
    "object_color",
    "object_enumeration",
    "action",
    "size",
    "details",
    "successful_alternative",
)

# a failure either has a successful alternative caption or is explained by
# the content labels; the two never mix
EXCLUSIVE_LABEL = "successful_alternative"

LABEL_HEADER = "query_id,labels,rating"


@dataclass(frozen=True)
class HumanLabelRecord:
    query_id: str
    labels: frozenset[str]
    rating: int

    def __post_init__(self) -> None:
        if not self.query_id:
            raise ValueError("query_id must be non-empty")
        if not self.labels:
            raise ValueError(f"record {self.query_id}: needs at least one label")
        unknown = self.labels - set(LABELS)
        if unknown:
            raise ValueError(f"record {self.query_id}: unknown labels {sorted(unknown)}")
        if EXCLUSIVE_LABEL in self.labels and len(self.labels) > 1:
            raise ValueError(
                f"record {self.query_id}: {EXCLUSIVE_LABEL} excludes all other labels"
            )
        if not 1 <= self.rating <= 10:
            raise ValueError(f"record {self.query_id}: rating must be in 1..10, got {self.rating}")


def read_labels(path: str) -> list[HumanLabelRecord]:
    out: list[HumanLabelRecord] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != LABEL_HEADER:
            raise ParseError(f"expected header {LABEL_HEADER!r}, got {header!r}", line=1, path=path)
        for lineno, line in enumerate(fh, start=2):
            stripped = line.rstrip("\n")
            if not stripped:
                raise ParseError("blank line", line=lineno, path=path)
            fields = stripped.split(",")
            if len(fields) != 3:
                raise ParseError("row needs query_id,labels,rating", line=lineno, path=path)
            query_id, raw_labels, raw_rating = fields
            if query_id in seen:
                raise DuplicateIdError(f"{path}:{lineno}: duplicate query_id {query_id!r}")
            try:
                rating = int(raw_rating)
            except ValueError as exc:
                raise ParseError(f"non-integer rating {raw_rating!r}", line=lineno, path=path) from exc
            try:
                rec = HumanLabelRecord(query_id, frozenset(raw_labels.split(";")), rating)
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno, path=path) from exc
            seen.add(query_id)
            out.append(rec)
    return out


def write_labels(path: str, records: list[HumanLabelRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(LABEL_HEADER + "\n")
        for rec in records:
            labels = ";".join(sorted(rec.labels))
            fh.write(f"{rec.query_id},{labels},{rec.rating}\n")


@dataclass(frozen=True)
class LabelDistribution:
    """Share of records carrying each label, plus the mean rating."""

    pct: dict[str, float]
    mean_rating: float


def label_distribution(records: list[HumanLabelRecord]) -> LabelDistribution:
    if not records:
        raise EmptyInputError("label_distribution needs at least one record")
    n = len(records)
    pct = {
        label: 100.0 * sum(1 for r in records if label in r.labels) / n for label in LABELS
    }
    mean_rating = sum(r.rating for r in records) / n
    return LabelDistribution(pct=pct, mean_rating=mean_rating)


@dataclass(frozen=True)
class Rule:
    """antecedent -> consequent with co-occurrence percentage."""

    antecedent: str
    consequent: str
    pct: float


def mine_rules(records: list[HumanLabelRecord], min_support: float = 0.0) -> list[Rule]:
    """Every ordered label pair with |A and B| / |A| at or above min_support.

    Percentages are relative to the antecedent count; pairs whose antecedent
    never occurs are omitted. Sorted by descending percentage, then by
    antecedent and consequent for a stable order.
    """
    if not records:
        raise EmptyInputError("mine_rules needs at least one record")
    counts = {label: 0 for label in LABELS}
    joint: dict[tuple[str, str], int] = {}
    for rec in records:
        for a in rec.labels:
            counts[a] += 1
            for b in rec.labels:
                if a != b:
                    joint[(a, b)] = joint.get((a, b), 0) + 1
    rules = []
    for a in LABELS:
        if counts[a] == 0:
            continue
        for b in LABELS:
            if a == b:
                continue
            pct = 100.0 * joint.get((a, b), 0) / counts[a]
            if pct >= min_support:
                rules.append(Rule(antecedent=a, consequent=b, pct=pct))
    rules.sort(key=lambda r: (-r.pct, r.antecedent, r.consequent))
    return rules
