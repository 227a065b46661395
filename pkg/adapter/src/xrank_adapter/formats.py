"""Readers and writers for the xrank interchange formats.

The consumer side lives in a separate package; the two only meet at the
files.  Layouts here must therefore stay bit-compatible with what that
package accepts, which is why the binary writer is spelled out struct by
struct instead of delegating to a serialization library.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

EMBEDDING_MAGIC = b"XRANKEMB"
EMBEDDING_VERSION = 1

# header: version u32, dim u32, row count u64; per row: id length u16,
# id bytes (utf-8), dim little-endian float32 values
_HEADER = struct.Struct("<IIQ")
_IDLEN = struct.Struct("<H")

COLOR_HEADER = "name,r,g,b"


@dataclass(frozen=True)
class QueryRow:
    query_id: str
    image_id: str
    text: str


@dataclass(frozen=True)
class CorpusRow:
    image_id: str
    sentences: tuple[str, ...]


@dataclass(frozen=True)
class PerturbedRow:
    query_id: str
    text: str


def _jsonl_records(path: str | Path) -> Iterable[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                raise ValueError(f"{path}:{lineno}: blank line")
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: not valid JSON: {exc}") from None
            if not isinstance(record, dict):
                raise ValueError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, record


def _field(record: dict, key: str, path: str | Path, lineno: int) -> str:
    value = record.get(key)
    if not isinstance(value, str) or not value:
        raise ValueError(f"{path}:{lineno}: missing or empty {key!r}")
    return value


def read_queries(path: str | Path) -> list[QueryRow]:
    """Read query records: one object per line with query_id, image_id, text."""
    rows = []
    seen: set[str] = set()
    for lineno, record in _jsonl_records(path):
        qid = _field(record, "query_id", path, lineno)
        if qid in seen:
            raise ValueError(f"{path}:{lineno}: duplicate query_id {qid!r}")
        seen.add(qid)
        rows.append(
            QueryRow(
                query_id=qid,
                image_id=_field(record, "image_id", path, lineno),
                text=_field(record, "text", path, lineno),
            )
        )
    return rows


def read_corpora(path: str | Path) -> list[CorpusRow]:
    """Read corpus records: image_id plus a non-empty list of sentences."""
    rows = []
    seen: set[str] = set()
    for lineno, record in _jsonl_records(path):
        image_id = _field(record, "image_id", path, lineno)
        if image_id in seen:
            raise ValueError(f"{path}:{lineno}: duplicate image_id {image_id!r}")
        seen.add(image_id)
        sentences = record.get("sentences")
        if not isinstance(sentences, list) or not sentences:
            raise ValueError(f"{path}:{lineno}: sentences must be a non-empty list")
        for sentence in sentences:
            if not isinstance(sentence, str) or not sentence:
                raise ValueError(f"{path}:{lineno}: sentences must be non-empty strings")
        rows.append(CorpusRow(image_id=image_id, sentences=tuple(sentences)))
    return rows


def read_perturbed(path: str | Path) -> list[PerturbedRow]:
    """Read perturbed query records; only query_id and text matter here."""
    rows = []
    seen: set[str] = set()
    for lineno, record in _jsonl_records(path):
        qid = _field(record, "query_id", path, lineno)
        if qid in seen:
            raise ValueError(f"{path}:{lineno}: duplicate query_id {qid!r}")
        seen.add(qid)
        rows.append(PerturbedRow(query_id=qid, text=_field(record, "text", path, lineno)))
    return rows


def write_embeddings(path: str | Path, ids: Sequence[str], rows: np.ndarray) -> None:
    """Write an embedding matrix in the binary layout the consumer reads.

    rows is cast to contiguous little-endian float32; ids must be unique,
    non-empty, and fit in the 16-bit length field once encoded.
    """
    matrix = np.ascontiguousarray(rows, dtype="<f4")
    if matrix.ndim != 2:
        raise ValueError(f"embedding rows must be 2-dimensional, got {matrix.ndim}")
    if len(ids) != matrix.shape[0]:
        raise ValueError(f"{len(ids)} ids for {matrix.shape[0]} rows")
    dim = matrix.shape[1]
    if dim == 0:
        raise ValueError("embedding dimension must be positive")
    if len(set(ids)) != len(ids):
        raise ValueError("ids must be unique")
    with open(path, "wb") as fh:
        fh.write(EMBEDDING_MAGIC)
        fh.write(_HEADER.pack(EMBEDDING_VERSION, dim, matrix.shape[0]))
        for row_id, row in zip(ids, matrix):
            encoded = row_id.encode("utf-8")
            if not 0 < len(encoded) <= 0xFFFF:
                raise ValueError(f"id {row_id!r} does not fit the length field")
            fh.write(_IDLEN.pack(len(encoded)))
            fh.write(encoded)
            fh.write(row.tobytes())


def write_synset_graph(
    path: str | Path,
    nodes: Iterable[str],
    edges: Iterable[tuple[str, str]],
    antonyms: Iterable[tuple[str, str]],
) -> None:
    """Write the taxonomy TSV: S rows, then H rows, then A rows.

    The consumer insists that edge endpoints are declared before use, so
    every node is written first and edges are checked against the set.
    Antonym pairs are unordered over there; they are deduplicated and
    written once in canonical order here.
    """
    node_list = sorted(set(nodes))
    node_set = set(node_list)
    edge_list = sorted(set(edges))
    pair_set = {tuple(sorted(pair)) for pair in antonyms}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for node in node_list:
            fh.write(f"S\t{node}\n")
        for child, parent in edge_list:
            if child not in node_set or parent not in node_set:
                raise ValueError(f"edge ({child}, {parent}) references an undeclared node")
            if child == parent:
                raise ValueError(f"self edge on {child}")
            fh.write(f"H\t{child}\t{parent}\n")
        for first, second in sorted(pair_set):
            if first == second:
                raise ValueError(f"{first!r} cannot be its own antonym")
            fh.write(f"A\t{first}\t{second}\n")


def write_color_table(path: str | Path, colors: Mapping[str, tuple[int, int, int]]) -> None:
    """Write the name,r,g,b table, sorted by name."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(COLOR_HEADER + "\n")
        for name in sorted(colors):
            r, g, b = colors[name]
            for channel in (r, g, b):
                if not 0 <= channel <= 255:
                    raise ValueError(f"{name!r}: channel {channel} out of range")
            fh.write(f"{name},{r},{g},{b}\n")
