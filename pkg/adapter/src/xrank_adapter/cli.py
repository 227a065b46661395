"""Command line entry points.

Exit codes follow the consumer's convention: 0 on success, 1 when inputs
parsed but the operation cannot proceed (bad model, nothing to embed),
2 for unreadable or malformed files and usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .colors import export_colors
from .embed import ModelSpec, embed_corpora, embed_queries
from .errors import EmptyInputError, MissingSourceError, ModelLoadError
from .formats import read_corpora, read_perturbed, read_queries, write_embeddings
from .wndb import export_wordnet

_USAGE_ERRORS = (OSError, ValueError, MissingSourceError)
_DATA_ERRORS = (ModelLoadError, EmptyInputError)


def _run(fn) -> int:
    try:
        fn()
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _parser(prog: str, description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=prog, description=description)
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    return parser


def main_embed(argv: list[str] | None = None, *, encoder=None) -> int:
    """Embed query, corpus, and perturbed-query files with one model.

    The encoder parameter is a seam for tests; normally the model named
    on the command line is loaded.  One encoder serves every input, so
    all outputs of a run share a dimension.
    """
    parser = _parser("xrank-embed", "Embed texts with a sentence-transformer model.")
    parser.add_argument("--model", required=True, help="model name or path")
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--device", default=None, help="e.g. cpu or cuda")
    parser.add_argument("--queries", help="query records to embed")
    parser.add_argument(
        "--out",
        "--out-queries",
        dest="out_queries",
        help="where the query embeddings go",
    )
    parser.add_argument("--corpora", help="corpus records to embed")
    parser.add_argument("--out-corpora", help="where the corpus embeddings go")
    parser.add_argument("--perturbed", help="perturbed query records to embed")
    parser.add_argument("--out-perturbed", help="where those embeddings go")
    args = parser.parse_args(argv)

    jobs = [
        ("--queries", args.queries, "--out", args.out_queries),
        ("--corpora", args.corpora, "--out-corpora", args.out_corpora),
        ("--perturbed", args.perturbed, "--out-perturbed", args.out_perturbed),
    ]
    for in_flag, in_path, out_flag, out_path in jobs:
        if (in_path is None) != (out_path is None):
            parser.error(f"{in_flag} and {out_flag} must be given together")
    if all(in_path is None for _, in_path, _, _ in jobs):
        parser.error("nothing to embed; give --queries, --corpora, or --perturbed")

    def work() -> None:
        spec = ModelSpec(
            name=args.model, batch_size=args.batch_size, device=args.device
        )
        enc = encoder if encoder is not None else spec.load()
        stats: dict[str, object] = {"model": spec.name}
        if args.queries is not None:
            ids, rows = embed_queries(
                read_queries(args.queries), enc, spec.batch_size
            )
            write_embeddings(args.out_queries, ids, rows)
            stats["queries"] = len(ids)
            stats["dim"] = int(rows.shape[1])
        if args.corpora is not None:
            ids, rows = embed_corpora(
                read_corpora(args.corpora), enc, spec.batch_size
            )
            write_embeddings(args.out_corpora, ids, rows)
            stats["corpora"] = len(ids)
            stats["dim"] = int(rows.shape[1])
        if args.perturbed is not None:
            ids, rows = embed_queries(
                read_perturbed(args.perturbed), enc, spec.batch_size
            )
            write_embeddings(args.out_perturbed, ids, rows)
            stats["perturbed"] = len(ids)
            stats["dim"] = int(rows.shape[1])
        print(json.dumps(stats, sort_keys=True))

    return _run(work)


def main_export_wordnet(argv: list[str] | None = None) -> int:
    parser = _parser(
        "xrank-export-wordnet",
        "Export the noun taxonomy and adjective antonym pairs from a WordNet dict directory.",
    )
    parser.add_argument("--dict", required=True, dest="dict_dir", help="dict directory")
    parser.add_argument("--out", required=True, help="output taxonomy file")
    args = parser.parse_args(argv)

    def work() -> None:
        nodes, edges, antonyms = export_wordnet(args.dict_dir, args.out)
        print(
            json.dumps(
                {"nodes": nodes, "edges": edges, "antonyms": antonyms},
                sort_keys=True,
            )
        )

    return _run(work)


def main_export_colors(argv: list[str] | None = None) -> int:
    parser = _parser("xrank-export-colors", "Export the CSS/X11 named-color table.")
    parser.add_argument("--out", required=True, help="output color table")
    args = parser.parse_args(argv)

    def work() -> None:
        print(json.dumps({"colors": export_colors(args.out)}))

    return _run(work)
