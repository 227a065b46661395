"""Aggregate report rendering: one delimited summary plus diagnostic figures.

Everything written here is byte-stable for identical inputs. Figures go
through the Agg backend and drop the PNG Software tag, which otherwise
embeds the renderer version.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be pinned first

REPORT_CSV = "report.csv"
_FIG_DPI = 100
_BAR_COLOR = "#4878a8"
_BAR_EDGE = "#2d4a66"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _report_rows(summary, explanations, global_report, deltas):
    rows = []
    if summary is not None:
        rows.append(("ranking", "n_queries", summary["n_queries"]))
        for k, v in sorted(summary["recall_at"].items(), key=lambda kv: int(kv[0])):
            rows.append(("ranking", f"recall_at_{k}", v))
        for k, v in sorted(summary["mrr_at"].items(), key=lambda kv: int(kv[0])):
            rows.append(("ranking", f"mrr_at_{k}", v))
        rows.append(("ranking", "median_rank", summary["median_rank"]))
        rows.append(("ranking", "fail_fraction", summary["fail_fraction"]))
        rows.append(("ranking", "n_failures", summary["n_failures"]))
    if global_report is not None:
        for key in (
            "ca",
            "ncs",
            "ce",
            "sd",
            "obj_hit",
            "obj_miss",
            "matched_synset_pct",
            "avg_enum_disagreement_pct",
            "ce_mode",
            "n_failures",
        ):
            rows.append(("failures", key, global_report[key]))
    elif explanations:
        rows.append(("failures", "n_failures", len(explanations)))
    for name in sorted(deltas):
        delta = deltas[name]
        rows.append(("rerank_" + name, "n_perturbed", delta["n_perturbed"]))
        rows.append(("rerank_" + name, "lower_pct", delta["lower_pct"]))
        rows.append(("rerank_" + name, "higher_pct", delta["higher_pct"]))
        rows.append(("rerank_" + name, "same_pct", delta["same_pct"]))
    return rows


def _save(fig, path: str) -> None:
    fig.savefig(path, dpi=_FIG_DPI, metadata={"Software": None})
    plt.close(fig)


def _recall_figure(summary, path: str) -> None:
    ks = sorted(summary["recall_at"], key=int)
    recalls = [summary["recall_at"][k] for k in ks]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(range(len(ks)), recalls, color=_BAR_COLOR, edgecolor=_BAR_EDGE)
    ax.set_xticks(range(len(ks)))
    ax.set_xticklabels([f"@{k}" for k in ks])
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("cutoff")
    ax.set_ylabel("recall")
    ax.set_title("recall by cutoff")
    fig.tight_layout()
    _save(fig, path)


def _rank_histogram(ranks, path: str) -> None:
    top = max(ranks)
    bins = range(1, top + 2)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.hist(ranks, bins=bins, color=_BAR_COLOR, edgecolor=_BAR_EDGE, align="left")
    ax.set_xlabel("rank of the ground-truth image")
    ax.set_ylabel("queries")
    ax.set_title("ground-truth rank distribution")
    fig.tight_layout()
    _save(fig, path)


def _failure_metrics_figure(explanations, path: str) -> None:
    ca = [ex["ca"] for ex in explanations]
    ncs = [ex["ncs"] for ex in explanations if ex["ncs"] is not None]
    ce = [ex["ce"] for ex in explanations]
    sd = [ex["sd"]["sd_avg"] for ex in explanations if ex["sd"]["sd_avg"] is not None]
    fig, axes = plt.subplots(2, 2, figsize=(8.0, 6.0))
    panels = (
        (axes[0][0], ca, "concept agreement", 10),
        (axes[0][1], ncs, "non-common similarity", 10),
        (axes[1][0], ce, "enumeration gap", None),
        (axes[1][1], sd, "size disagreement share", 10),
    )
    for ax, values, title, nbins in panels:
        if values:
            bins = nbins if nbins is not None else range(0, max(values) + 2)
            ax.hist(values, bins=bins, color=_BAR_COLOR, edgecolor=_BAR_EDGE)
        else:
            ax.text(0.5, 0.5, "no data", ha="center", va="center", transform=ax.transAxes)
        ax.set_title(title)
        ax.set_ylabel("failures")
    fig.tight_layout()
    _save(fig, path)


def _delta_figure(deltas, path: str) -> None:
    names = sorted(deltas)
    lower = [deltas[n]["lower_pct"] for n in names]
    higher = [deltas[n]["higher_pct"] for n in names]
    same = [deltas[n]["same_pct"] for n in names]
    width = 0.28
    xs = range(len(names))
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.bar([x - width for x in xs], lower, width, label="lower", color="#a84848",
           edgecolor="#662d2d")
    ax.bar(list(xs), same, width, label="same", color="#888888", edgecolor="#555555")
    ax.bar([x + width for x in xs], higher, width, label="higher", color=_BAR_COLOR,
           edgecolor=_BAR_EDGE)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names)
    ax.set_ylabel("share of changed queries (%)")
    ax.set_title("rank movement after perturbation")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def render_report(
    outdir: str,
    summary: dict | None = None,
    explanations: list[dict] | None = None,
    global_report: dict | None = None,
    deltas: dict[str, dict] | None = None,
    ranks: list[int] | None = None,
    figures: bool = True,
) -> list[str]:
    """Write report.csv and the figure files into outdir.

    Returns the written paths in a fixed order. Sections with no input are
    skipped, both in the delimited output and in the figure set.
    """
    deltas = deltas or {}
    os.makedirs(outdir, exist_ok=True)
    written = []

    csv_path = os.path.join(outdir, REPORT_CSV)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["section", "metric", "value"])
        for section, metric, value in _report_rows(summary, explanations, global_report, deltas):
            writer.writerow([section, metric, _fmt(value)])
    written.append(csv_path)

    if not figures:
        return written

    if summary is not None and summary["recall_at"]:
        path = os.path.join(outdir, "recall.png")
        _recall_figure(summary, path)
        written.append(path)
    if ranks:
        path = os.path.join(outdir, "rank_histogram.png")
        _rank_histogram(ranks, path)
        written.append(path)
    if explanations:
        path = os.path.join(outdir, "failure_metrics.png")
        _failure_metrics_figure(explanations, path)
        written.append(path)
    if deltas:
        path = os.path.join(outdir, "rerank_delta.png")
        _delta_figure(deltas, path)
        written.append(path)
    return written
