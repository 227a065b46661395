"""JSON and CSV surfaces for the pipeline artifacts.

JSONL rows are compact; standalone reports are pretty-printed with sorted
keys. Both are byte-stable for identical inputs.
"""

from __future__ import annotations

import json

from .adversarial import PerturbedQuery, RerankDelta, Substitution
from .errors import ParseError
from .explain import FailureExplanation, GlobalReport, SizeDisagreement
from .ranker import RankResult, RankSummary
from .rules import LabelDistribution, Rule
from .types import FailureRecord, ValidationReport

RANKS_CSV_HEADER = "query_id,gt_rank,top1_id"


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _dump_jsonl_row(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"


def _load_jsonl(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped:
                raise ParseError("blank line", line=lineno, path=path)
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line=lineno, path=path) from exc
            yield lineno, obj


# ------------------------------------------------------------------- failures

def write_failures(path: str, failures: list[FailureRecord] | tuple[FailureRecord, ...]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for f in failures:
            fh.write(
                _dump_jsonl_row(
                    {
                        "query_id": f.query_id,
                        "gt_image_id": f.gt_image_id,
                        "retrieved_image_id": f.retrieved_image_id,
                        "gt_rank": f.gt_rank,
                    }
                )
            )


def read_failures(path: str) -> list[FailureRecord]:
    out = []
    for lineno, obj in _load_jsonl(path):
        try:
            out.append(
                FailureRecord(
                    query_id=obj["query_id"],
                    gt_image_id=obj["gt_image_id"],
                    retrieved_image_id=obj["retrieved_image_id"],
                    gt_rank=int(obj["gt_rank"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad failure record: {exc}", line=lineno, path=path) from exc
    return out


# -------------------------------------------------------------------- summary

def summary_to_dict(summary: RankSummary) -> dict:
    return {
        "n_queries": summary.n_queries,
        "recall_at": {str(k): v for k, v in sorted(summary.recall_at.items())},
        "mrr_at": {str(k): v for k, v in sorted(summary.mrr_at.items())},
        "median_rank": summary.median_rank,
        "fail_fraction": summary.fail_fraction,
        "n_failures": len(summary.failures),
        "failures": [
            {
                "query_id": f.query_id,
                "gt_image_id": f.gt_image_id,
                "retrieved_image_id": f.retrieved_image_id,
                "gt_rank": f.gt_rank,
            }
            for f in summary.failures
        ],
    }


def write_ranks_csv(path: str, results: list[RankResult]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(RANKS_CSV_HEADER + "\n")
        for r in results:
            fh.write(f"{r.query_id},{r.gt_rank},{r.top1_id}\n")


# --------------------------------------------------------------- explanations

def explanation_to_dict(ex: FailureExplanation) -> dict:
    return {
        "query_id": ex.query_id,
        "gt_image_id": ex.gt_image_id,
        "retrieved_image_id": ex.retrieved_image_id,
        "gt_rank": ex.gt_rank,
        "ca": ex.ca,
        "ncs": ex.ncs,
        "ncs_pairs": [[g, r, ps] for g, r, ps in ex.ncs_pairs],
        "ce": ex.ce,
        "sd": {
            "binary_count": ex.sd.binary_count,
            "match_count": ex.sd.match_count,
            "sd_avg": ex.sd.sd_avg,
            "sd_optimistic": ex.sd.sd_optimistic,
        },
    }


def write_explanations(path: str, explanations: list[FailureExplanation]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ex in explanations:
            fh.write(_dump_jsonl_row(explanation_to_dict(ex)))


def read_explanations(path: str) -> list[FailureExplanation]:
    out = []
    for lineno, obj in _load_jsonl(path):
        try:
            sd = obj["sd"]
            out.append(
                FailureExplanation(
                    query_id=obj["query_id"],
                    gt_image_id=obj["gt_image_id"],
                    retrieved_image_id=obj["retrieved_image_id"],
                    gt_rank=int(obj["gt_rank"]),
                    ca=float(obj["ca"]),
                    ncs=None if obj["ncs"] is None else float(obj["ncs"]),
                    ncs_pairs=tuple((g, r, float(ps)) for g, r, ps in obj["ncs_pairs"]),
                    ce=int(obj["ce"]),
                    sd=SizeDisagreement(
                        binary_count=int(sd["binary_count"]),
                        match_count=int(sd["match_count"]),
                        sd_avg=None if sd["sd_avg"] is None else float(sd["sd_avg"]),
                        sd_optimistic=float(sd["sd_optimistic"]),
                    ),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad explanation record: {exc}", line=lineno, path=path) from exc
    return out


def global_report_to_dict(report: GlobalReport) -> dict:
    return {
        "ca": report.avg_ca,
        "ncs": report.avg_ncs,
        "ce": report.ce_avg,
        "sd": report.avg_sd,
        "obj_hit": report.obj_hit,
        "obj_miss": report.obj_miss,
        "matched_synset_pct": report.matched_synset_pct,
        "avg_enum_disagreement_pct": report.avg_enum_disagreement_pct,
        "ce_mode": report.ce_mode,
        "n_failures": report.n_failures,
        "sd_kind": "share of matched pairs at or above the size threshold",
    }


# ------------------------------------------------------------------ perturbed

def perturbed_to_dict(p: PerturbedQuery) -> dict:
    return {
        "query_id": p.query_id,
        "original_text": p.original_text,
        "perturbed_text": p.perturbed_text,
        "substitutions": [[s.position, s.old, s.new] for s in p.substitutions],
    }


def write_perturbed(path: str, perturbed: list[PerturbedQuery]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in perturbed:
            fh.write(_dump_jsonl_row(perturbed_to_dict(p)))


def read_perturbed(path: str) -> list[PerturbedQuery]:
    out = []
    for lineno, obj in _load_jsonl(path):
        try:
            out.append(
                PerturbedQuery(
                    query_id=obj["query_id"],
                    original_text=obj["original_text"],
                    perturbed_text=obj["perturbed_text"],
                    substitutions=tuple(
                        Substitution(position=int(pos), old=old, new=new)
                        for pos, old, new in obj["substitutions"]
                    ),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad perturbed record: {exc}", line=lineno, path=path) from exc
    return out


# --------------------------------------------------------------------- deltas

def delta_to_dict(delta: RerankDelta) -> dict:
    return {
        "n_perturbed": delta.n_perturbed,
        "lower_pct": delta.lower_pct,
        "higher_pct": delta.higher_pct,
        "same_pct": delta.same_pct,
    }


# ---------------------------------------------------------------------- rules

def rules_to_dict(rules: list[Rule], min_support: float) -> dict:
    return {
        "min_support": min_support,
        "rules": [
            {"antecedent": r.antecedent, "consequent": r.consequent, "pct": r.pct} for r in rules
        ],
    }


def distribution_to_dict(dist: LabelDistribution) -> dict:
    return {"pct": dict(sorted(dist.pct.items())), "mean_rating": dist.mean_rating}


# ----------------------------------------------------------------- validation

def validation_to_dict(report: ValidationReport) -> dict:
    return {
        "ok": report.ok,
        "n_defects": len(report.defects),
        "defects": [
            {"kind": d.kind, "subject": d.subject, "detail": d.detail} for d in report.defects
        ],
    }
