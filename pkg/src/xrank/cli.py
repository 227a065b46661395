"""Command line front end.

Exit codes: 0 on success, 1 when the data fails validation (broken
references, undefined metrics, unsatisfiable perturbations), 2 on I/O and
parse problems. argparse keeps its own convention of 2 for usage errors,
which lands in the same bucket.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import __version__, ingest
from .adversarial import (
    DEFAULT_COLOR_THRESHOLD,
    PerturbationKind,
    PerturbationSpec,
    changed_query_ids,
    dataset_color_names,
    perturb_queries,
    rerank_delta,
)
from .errors import (
    BadMagicError,
    CountMismatchError,
    MissingQueryError,
    ParseError,
    TruncatedFileError,
    XRankError,
)
from .explain import DEFAULT_SIZE_THRESHOLD, aggregate, explain_all
from .ranker import rank_all, summarize
from .rules import label_distribution, mine_rules, read_labels
from .serialize import (
    RANKS_CSV_HEADER,
    delta_to_dict,
    distribution_to_dict,
    dump_json,
    explanation_to_dict,
    global_report_to_dict,
    read_explanations,
    read_failures,
    read_perturbed,
    rules_to_dict,
    summary_to_dict,
    validation_to_dict,
    write_explanations,
    write_failures,
    write_perturbed,
    write_ranks_csv,
)
from .toyembed import DEFAULT_DIM, ToyEmbedder
from .types import validate_dataset
from .wordnet import SynsetGraph

WORDNET_ENV = "XRANK_WORDNET"

_IO_ERRORS = (OSError, ParseError, BadMagicError, TruncatedFileError, CountMismatchError)

_DEFAULT_JOBS = max(1, os.cpu_count() or 1)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, path=path) from exc


# ----------------------------------------------------------------- subcommands

def cmd_ingest_check(args) -> int:
    annotations = ingest.read_annotations(args.annotations)
    queries = ingest.read_queries(args.queries)
    corpora = ingest.read_corpora(args.corpora)
    q_emb = ingest.read_embeddings(args.query_emb) if args.query_emb else None
    c_emb = ingest.read_embeddings(args.corpus_emb) if args.corpus_emb else None
    if args.wordnet:
        SynsetGraph.from_file(args.wordnet)
    if args.colors:
        ingest.read_color_table(args.colors)
    report = validate_dataset(annotations, queries, corpora, q_emb, c_emb)
    _emit(dump_json(validation_to_dict(report)), args.out)
    return 0 if report.ok else 1


def cmd_embed_toy(args) -> int:
    pairs = (
        (args.queries, args.out_queries, "--queries", "--out-queries"),
        (args.corpora, args.out_corpora, "--corpora", "--out-corpora"),
        (args.perturbed, args.out_perturbed, "--perturbed", "--out-perturbed"),
    )
    if all(src is None for src, *_ in pairs):
        return _fail_usage("embed-toy needs at least one of --queries, --corpora, --perturbed")
    for src, dst, src_flag, dst_flag in pairs:
        if (src is None) != (dst is None):
            return _fail_usage(f"{src_flag} and {dst_flag} must be given together")
    embedder = ToyEmbedder(dim=args.dim, seed=args.seed)
    if args.queries:
        queries = ingest.read_queries(args.queries)
        ingest.write_embeddings(args.out_queries, embedder.embed_queries(queries))
    if args.corpora:
        corpora = ingest.read_corpora(args.corpora)
        ingest.write_embeddings(args.out_corpora, embedder.embed_corpora(corpora))
    if args.perturbed:
        perturbed = read_perturbed(args.perturbed)
        matrix = embedder.embed_texts(
            [p.query_id for p in perturbed], [p.perturbed_text for p in perturbed]
        )
        ingest.write_embeddings(args.out_perturbed, matrix)
    return 0


def cmd_rank(args) -> int:
    queries = ingest.read_queries(args.queries)
    q_emb = ingest.read_embeddings(args.query_emb)
    c_emb = ingest.read_embeddings(args.corpus_emb)
    results = rank_all(queries, q_emb, c_emb, jobs=args.jobs)
    ks = [int(k) for k in args.ks.split(",")] if args.ks else None
    summary = summarize(results, ks)
    _emit(dump_json(summary_to_dict(summary)), args.out)
    if args.ranks_csv:
        write_ranks_csv(args.ranks_csv, results)
    if args.failures_out:
        write_failures(args.failures_out, list(summary.failures))
    return 0


def cmd_explain(args) -> int:
    if not args.wordnet:
        return _fail_usage(f"no synset graph: pass --wordnet or set {WORDNET_ENV}")
    failures = read_failures(args.failures)
    annotations = {a.image_id: a for a in ingest.read_annotations(args.annotations)}
    graph = SynsetGraph.from_file(args.wordnet)
    explanations = explain_all(
        failures, annotations, graph, threshold=args.size_threshold, jobs=args.jobs
    )
    write_explanations(args.out, explanations)
    if args.global_out:
        if explanations:
            report = aggregate(explanations, annotations)
            _emit(dump_json(global_report_to_dict(report)), args.global_out)
        else:
            print("no failures to aggregate, skipping --global-out", file=sys.stderr)
    return 0


def cmd_perturb(args) -> int:
    kind = PerturbationKind(args.kind)
    queries = ingest.read_queries(args.queries)
    graph = None
    colors = None
    if kind is PerturbationKind.ANTONYM:
        if not args.wordnet:
            return _fail_usage(f"antonym perturbation needs --wordnet or {WORDNET_ENV}")
        graph = SynsetGraph.from_file(args.wordnet)
    if kind in (PerturbationKind.COLOR_ALL, PerturbationKind.COLOR_IN):
        if not args.colors:
            return _fail_usage("color perturbations need --colors")
        colors = ingest.read_color_table(args.colors)
    dataset_colors = None
    if kind is PerturbationKind.COLOR_IN:
        dataset_colors = dataset_color_names(queries, colors)
    spec = PerturbationSpec(
        graph=graph,
        colors=colors,
        color_threshold=args.color_threshold,
        dataset_colors=dataset_colors,
        seed=args.seed,
    )
    perturbed = perturb_queries(queries, kind, spec)
    write_perturbed(args.out, perturbed)
    applicability = len(perturbed) / len(queries) if queries else 0.0
    stats = {
        "kind": args.kind,
        "n_queries": len(queries),
        "n_perturbed": len(perturbed),
        "applicability": applicability,
    }
    print(json.dumps(stats, sort_keys=True))
    return 0


def cmd_rerank(args) -> int:
    queries = ingest.read_queries(args.queries)
    original = ingest.read_embeddings(args.query_emb)
    adversarial = ingest.read_embeddings(args.adv_emb)
    corpus = ingest.read_embeddings(args.corpus_emb)
    adv_ids = set(adversarial.ids)
    adv_queries = [q for q in queries if q.query_id in adv_ids]
    if len(adv_queries) != len(adv_ids):
        missing = sorted(adv_ids - {q.query_id for q in adv_queries})
        raise MissingQueryError(f"no query record for {missing[0]!r}")
    changed = changed_query_ids(original, adversarial)
    original_results = rank_all(queries, original, corpus, jobs=args.jobs)
    adversarial_results = rank_all(adv_queries, adversarial, corpus, jobs=args.jobs)
    delta = rerank_delta(original_results, adversarial_results, changed)
    _emit(dump_json(delta_to_dict(delta)), args.out)
    return 0


def cmd_rules(args) -> int:
    records = read_labels(args.labels)
    rules = mine_rules(records, min_support=args.min_support)
    _emit(dump_json(rules_to_dict(rules, args.min_support)), args.out)
    if args.distribution_out:
        _emit(dump_json(distribution_to_dict(label_distribution(records))), args.distribution_out)
    return 0


def _read_ranks_csv(path: str) -> list[int]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RANKS_CSV_HEADER.split(","):
            raise ParseError(f"expected header {RANKS_CSV_HEADER!r}", line=1, path=path)
        ranks = []
        for lineno, row in enumerate(reader, start=2):
            try:
                ranks.append(int(row[1]))
            except (IndexError, ValueError) as exc:
                raise ParseError(f"bad rank row: {exc}", line=lineno, path=path) from exc
        return ranks


def cmd_report(args) -> int:
    summary = _load_json_file(args.summary) if args.summary else None
    explanations = None
    if args.explanations:
        explanations = [explanation_to_dict(ex) for ex in read_explanations(args.explanations)]
    global_report = _load_json_file(args.global_report) if args.global_report else None
    deltas = {}
    for item in args.delta or []:
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            return _fail_usage(f"--delta expects NAME=PATH, got {item!r}")
        if name in deltas:
            return _fail_usage(f"--delta name {name!r} given twice")
        deltas[name] = _load_json_file(path)
    ranks = _read_ranks_csv(args.ranks_csv) if args.ranks_csv else None
    from .report import render_report

    written = render_report(
        args.outdir,
        summary=summary,
        explanations=explanations,
        global_report=global_report,
        deltas=deltas,
        ranks=ranks,
        figures=not args.no_figures,
    )
    for path in written:
        print(path)
    return 0


# ---------------------------------------------------------------------- parser

def _version_text() -> str:
    formats = " ".join(f"{name}={ver}" for name, ver in sorted(ingest.FORMAT_VERSIONS.items()))
    return f"%(prog)s {__version__}\nformat versions: {formats}"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xrank",
        description="Rank text-image retrieval, explain its failures, probe its robustness.",
    )
    parser.add_argument("--version", action="version", version=_version_text())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate a dataset and report every defect")
    p.add_argument("--annotations", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--corpora", required=True)
    p.add_argument("--query-emb")
    p.add_argument("--corpus-emb")
    p.add_argument("--wordnet", default=os.environ.get(WORDNET_ENV))
    p.add_argument("--colors")
    p.add_argument("--out", help="validation report path (default stdout)")
    p.set_defaults(handler=cmd_ingest_check)

    p = sub.add_parser("embed-toy", help="hash-bucket bag-of-words embeddings")
    p.add_argument("--queries")
    p.add_argument("--out-queries")
    p.add_argument("--corpora")
    p.add_argument("--out-corpora")
    p.add_argument("--perturbed")
    p.add_argument("--out-perturbed")
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_embed_toy)

    p = sub.add_parser("rank", help="rank the corpus for every query")
    p.add_argument("--queries", required=True)
    p.add_argument("--query-emb", required=True)
    p.add_argument("--corpus-emb", required=True)
    p.add_argument("--ks", help="comma-separated recall/MRR cutoffs")
    p.add_argument("--jobs", type=int, default=_DEFAULT_JOBS)
    p.add_argument("--out", help="summary JSON path (default stdout)")
    p.add_argument("--ranks-csv", help="per-query rank table")
    p.add_argument("--failures-out", help="failed queries as JSON lines")
    p.set_defaults(handler=cmd_rank)

    p = sub.add_parser("explain", help="score every failure against the annotations")
    p.add_argument("--failures", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--wordnet", default=os.environ.get(WORDNET_ENV))
    p.add_argument("--size-threshold", type=float, default=DEFAULT_SIZE_THRESHOLD)
    p.add_argument("--jobs", type=int, default=_DEFAULT_JOBS)
    p.add_argument("--out", required=True, help="per-failure JSON lines")
    p.add_argument("--global-out", help="aggregate report JSON")
    p.set_defaults(handler=cmd_explain)

    p = sub.add_parser("perturb", help="rewrite queries with adversarial word swaps")
    p.add_argument("--queries", required=True)
    p.add_argument("--kind", required=True, choices=[k.value for k in PerturbationKind])
    p.add_argument("--wordnet", default=os.environ.get(WORDNET_ENV))
    p.add_argument("--colors")
    p.add_argument("--color-threshold", type=float, default=DEFAULT_COLOR_THRESHOLD)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="perturbed queries as JSON lines")
    p.set_defaults(handler=cmd_perturb)

    p = sub.add_parser("rerank", help="compare rankings before and after perturbation")
    p.add_argument("--queries", required=True)
    p.add_argument("--query-emb", required=True)
    p.add_argument("--adv-emb", required=True)
    p.add_argument("--corpus-emb", required=True)
    p.add_argument("--jobs", type=int, default=_DEFAULT_JOBS)
    p.add_argument("--out", help="rank movement JSON (default stdout)")
    p.set_defaults(handler=cmd_rerank)

    p = sub.add_parser("rules", help="mine co-occurrence rules from human labels")
    p.add_argument("--labels", required=True)
    p.add_argument("--min-support", type=float, default=0.0)
    p.add_argument("--out", help="rules JSON (default stdout)")
    p.add_argument("--distribution-out", help="label distribution JSON")
    p.set_defaults(handler=cmd_rules)

    p = sub.add_parser("report", help="render the delimited report and its figures")
    p.add_argument("--outdir", required=True)
    p.add_argument("--summary", help="summary JSON from rank")
    p.add_argument("--explanations", help="JSON lines from explain")
    p.add_argument("--global-report", help="aggregate JSON from explain")
    p.add_argument("--delta", action="append", metavar="NAME=PATH",
                   help="rank movement JSON from rerank, repeatable")
    p.add_argument("--ranks-csv", help="per-query rank table from rank")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(handler=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _IO_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (XRankError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
