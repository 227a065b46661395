"""Readers and writers for the on-disk formats.

Five formats: annotations, queries, and corpora as JSONL; embeddings as a
little-endian binary; the synset graph as TSV; the color table as CSV.
Readers validate eagerly and raise on the first malformed record; writers
emit canonical byte-stable output with "\\n" line endings.
"""

from __future__ import annotations

import json
import struct
from typing import BinaryIO

import numpy as np

from .errors import (
    BadMagicError,
    CountMismatchError,
    DuplicateIdError,
    ParseError,
    TruncatedFileError,
)
from .types import (
    BoundingBox,
    ConceptInstance,
    CorpusRecord,
    EmbeddingMatrix,
    ImageAnnotation,
    QueryRecord,
    is_valid_synset_id,
)

EMBEDDING_MAGIC = b"XRANKEMB"
EMBEDDING_VERSION = 1

FORMAT_VERSIONS = {
    "annotation": 1,
    "query": 1,
    "corpus": 1,
    "embedding": EMBEDDING_VERSION,
    "synset-graph": 1,
    "color-table": 1,
    "labels": 1,
}


def _jsonl_records(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped:
                raise ParseError("blank line", line=lineno, path=path)
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line=lineno, path=path) from exc
            if not isinstance(obj, dict):
                raise ParseError("record must be a JSON object", line=lineno, path=path)
            yield lineno, obj


def _require(obj: dict, key: str, lineno: int, path: str):
    if key not in obj:
        raise ParseError(f"missing field {key!r}", line=lineno, path=path)
    return obj[key]


# ---------------------------------------------------------------- annotations

def read_annotations(path: str) -> list[ImageAnnotation]:
    out: list[ImageAnnotation] = []
    seen: set[str] = set()
    for lineno, obj in _jsonl_records(path):
        image_id = _require(obj, "image_id", lineno, path)
        width = _require(obj, "width", lineno, path)
        height = _require(obj, "height", lineno, path)
        raw_instances = _require(obj, "instances", lineno, path)
        if not isinstance(raw_instances, list):
            raise ParseError("instances must be a list", line=lineno, path=path)
        instances = []
        for k, inst in enumerate(raw_instances):
            if not isinstance(inst, dict) or "synset" not in inst or "box" not in inst:
                raise ParseError(f"instance {k} needs synset and box", line=lineno, path=path)
            synset = inst["synset"]
            if not isinstance(synset, str) or not is_valid_synset_id(synset):
                raise ParseError(f"instance {k}: bad synset id {synset!r}", line=lineno, path=path)
            box = inst["box"]
            if not isinstance(box, list) or len(box) != 4:
                raise ParseError(f"instance {k}: box must be [x, y, w, h]", line=lineno, path=path)
            try:
                instances.append(ConceptInstance(synset, BoundingBox(*map(float, box))))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"instance {k}: {exc}", line=lineno, path=path) from exc
        if image_id in seen:
            raise DuplicateIdError(f"{path}:{lineno}: duplicate image_id {image_id!r}")
        try:
            ann = ImageAnnotation(str(image_id), int(width), int(height), tuple(instances))
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), line=lineno, path=path) from exc
        seen.add(ann.image_id)
        out.append(ann)
    return out


def write_annotations(path: str, annotations: list[ImageAnnotation]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ann in annotations:
            obj = {
                "image_id": ann.image_id,
                "width": ann.width,
                "height": ann.height,
                "instances": [
                    {"synset": i.synset, "box": [i.box.x, i.box.y, i.box.w, i.box.h]}
                    for i in ann.instances
                ],
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


# --------------------------------------------------------------------- queries

def read_queries(path: str) -> list[QueryRecord]:
    out: list[QueryRecord] = []
    seen: set[str] = set()
    for lineno, obj in _jsonl_records(path):
        query_id = _require(obj, "query_id", lineno, path)
        image_id = _require(obj, "image_id", lineno, path)
        text = _require(obj, "text", lineno, path)
        if query_id in seen:
            raise DuplicateIdError(f"{path}:{lineno}: duplicate query_id {query_id!r}")
        try:
            rec = QueryRecord(str(query_id), str(image_id), str(text))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, path=path) from exc
        seen.add(rec.query_id)
        out.append(rec)
    return out


def write_queries(path: str, queries: list[QueryRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for q in queries:
            obj = {"query_id": q.query_id, "image_id": q.image_id, "text": q.text}
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


# --------------------------------------------------------------------- corpora

def read_corpora(path: str) -> list[CorpusRecord]:
    out: list[CorpusRecord] = []
    seen: set[str] = set()
    for lineno, obj in _jsonl_records(path):
        image_id = _require(obj, "image_id", lineno, path)
        sentences = _require(obj, "sentences", lineno, path)
        if not isinstance(sentences, list) or not all(isinstance(s, str) for s in sentences):
            raise ParseError("sentences must be a list of strings", line=lineno, path=path)
        if image_id in seen:
            raise DuplicateIdError(f"{path}:{lineno}: duplicate image_id {image_id!r}")
        try:
            rec = CorpusRecord(str(image_id), tuple(sentences))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, path=path) from exc
        seen.add(rec.image_id)
        out.append(rec)
    return out


def write_corpora(path: str, corpora: list[CorpusRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for c in corpora:
            obj = {"image_id": c.image_id, "sentences": list(c.sentences)}
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


# ------------------------------------------------------------------ embeddings
#
# layout: 8-byte magic, u32 version, u32 dim, u64 count, then per row a u16
# id byte length, the UTF-8 id, and dim little-endian float32 values.

_HEADER = struct.Struct("<IIQ")
_IDLEN = struct.Struct("<H")


def _read_exact(fh: BinaryIO, n: int, what: str, path: str) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise TruncatedFileError(f"{path}: unexpected end of file in {what}")
    return buf


def read_embeddings(path: str) -> EmbeddingMatrix:
    with open(path, "rb") as fh:
        magic = fh.read(len(EMBEDDING_MAGIC))
        if magic != EMBEDDING_MAGIC:
            raise BadMagicError(f"{path}: expected magic {EMBEDDING_MAGIC!r}, got {magic!r}")
        version, dim, count = _HEADER.unpack(_read_exact(fh, _HEADER.size, "header", path))
        if version != EMBEDDING_VERSION:
            raise ParseError(f"unsupported embedding file version {version}", path=path)
        if dim == 0:
            raise ParseError("dim must be positive", path=path)
        ids: list[str] = []
        rows = np.empty((count, dim), dtype=np.float32)
        row_bytes = 4 * dim
        for k in range(count):
            head = fh.read(_IDLEN.size)
            if len(head) == 0:
                raise CountMismatchError(f"{path}: header declares {count} rows, found {k}")
            if len(head) != _IDLEN.size:
                raise TruncatedFileError(f"{path}: unexpected end of file in row {k} id length")
            (id_len,) = _IDLEN.unpack(head)
            if id_len == 0:
                raise ParseError(f"row {k}: empty id", path=path)
            id_bytes = _read_exact(fh, id_len, f"row {k} id", path)
            try:
                ids.append(id_bytes.decode("utf-8"))
            except UnicodeDecodeError as exc:
                raise ParseError(f"row {k}: id is not valid UTF-8", path=path) from exc
            payload = _read_exact(fh, row_bytes, f"row {k} payload", path)
            rows[k] = np.frombuffer(payload, dtype="<f4")
        trailing = fh.read(1)
        if trailing:
            raise CountMismatchError(f"{path}: data present after the declared {count} rows")
    return EmbeddingMatrix(tuple(ids), rows)


def write_embeddings(path: str, matrix: EmbeddingMatrix) -> None:
    rows = np.ascontiguousarray(matrix.rows.astype(np.float32, copy=False))
    with open(path, "wb") as fh:
        fh.write(EMBEDDING_MAGIC)
        fh.write(_HEADER.pack(EMBEDDING_VERSION, matrix.dim, len(matrix)))
        for id_, row in zip(matrix.ids, rows):
            id_bytes = id_.encode("utf-8")
            if not 0 < len(id_bytes) <= 0xFFFF:
                raise ValueError(f"id {id_!r} does not fit the u16 length field")
            fh.write(_IDLEN.pack(len(id_bytes)))
            fh.write(id_bytes)
            fh.write(row.astype("<f4", copy=False).tobytes())


# ---------------------------------------------------------------- synset graph
#
# TSV with three record kinds: "S <synset>" declares a node, "H <child>
# <parent>" a hypernym edge, "A <lemma> <antonym>" an adjective antonym pair.
# Edge endpoints must be declared before use.

def read_synset_graph(path: str) -> tuple[list[str], list[tuple[str, str]], list[tuple[str, str]]]:
    nodes: list[str] = []
    node_set: set[str] = set()
    edges: list[tuple[str, str]] = []
    edge_set: set[tuple[str, str]] = set()
    antonyms: list[tuple[str, str]] = []
    antonym_set: set[tuple[str, str]] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped:
                raise ParseError("blank line", line=lineno, path=path)
            fields = stripped.split("\t")
            kind = fields[0]
            if kind == "S":
                if len(fields) != 2:
                    raise ParseError("S record needs exactly one field", line=lineno, path=path)
                synset = fields[1]
                if not is_valid_synset_id(synset):
                    raise ParseError(f"bad synset id {synset!r}", line=lineno, path=path)
                if synset in node_set:
                    raise DuplicateIdError(f"{path}:{lineno}: duplicate node {synset!r}")
                node_set.add(synset)
                nodes.append(synset)
            elif kind == "H":
                if len(fields) != 3:
                    raise ParseError("H record needs exactly two fields", line=lineno, path=path)
                child, parent = fields[1], fields[2]
                for end in (child, parent):
                    if end not in node_set:
                        raise ParseError(f"edge endpoint {end!r} not declared", line=lineno, path=path)
                if child == parent:
                    raise ParseError(f"self edge on {child!r}", line=lineno, path=path)
                if (child, parent) in edge_set:
                    raise ParseError(f"duplicate edge {child!r} -> {parent!r}", line=lineno, path=path)
                edge_set.add((child, parent))
                edges.append((child, parent))
            elif kind == "A":
                if len(fields) != 3:
                    raise ParseError("A record needs exactly two fields", line=lineno, path=path)
                a, b = fields[1], fields[2]
                for lemma in (a, b):
                    if not lemma or lemma != lemma.lower() or any(c.isspace() for c in lemma):
                        raise ParseError(f"bad lemma {lemma!r}", line=lineno, path=path)
                if a == b:
                    raise ParseError(f"lemma {a!r} cannot be its own antonym", line=lineno, path=path)
                if (a, b) in antonym_set:
                    raise ParseError(f"duplicate antonym pair {a!r} {b!r}", line=lineno, path=path)
                antonym_set.add((a, b))
                antonyms.append((a, b))
            else:
                raise ParseError(f"unknown record kind {kind!r}", line=lineno, path=path)
    return nodes, edges, antonyms


def write_synset_graph(
    path: str,
    nodes: list[str],
    edges: list[tuple[str, str]],
    antonyms: list[tuple[str, str]],
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for n in nodes:
            fh.write(f"S\t{n}\n")
        for child, parent in edges:
            fh.write(f"H\t{child}\t{parent}\n")
        for a, b in antonyms:
            fh.write(f"A\t{a}\t{b}\n")


# ----------------------------------------------------------------- color table

COLOR_HEADER = "name,r,g,b"


def read_color_table(path: str) -> dict[str, tuple[int, int, int]]:
    colors: dict[str, tuple[int, int, int]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != COLOR_HEADER:
            raise ParseError(f"expected header {COLOR_HEADER!r}, got {header!r}", line=1, path=path)
        for lineno, line in enumerate(fh, start=2):
            stripped = line.rstrip("\n")
            if not stripped:
                raise ParseError("blank line", line=lineno, path=path)
            fields = stripped.split(",")
            if len(fields) != 4:
                raise ParseError("row needs name,r,g,b", line=lineno, path=path)
            name = fields[0]
            if not name or name != name.lower():
                raise ParseError(f"color name must be lowercase, got {name!r}", line=lineno, path=path)
            if name in colors:
                raise DuplicateIdError(f"{path}:{lineno}: duplicate color {name!r}")
            try:
                rgb = tuple(int(v) for v in fields[1:])
            except ValueError as exc:
                raise ParseError(f"non-integer channel in {fields[1:]}", line=lineno, path=path) from exc
            if any(not 0 <= v <= 255 for v in rgb):
                raise ParseError(f"channel out of range in {rgb}", line=lineno, path=path)
            colors[name] = rgb  # type: ignore[assignment]
    return colors


def write_color_table(path: str, colors: dict[str, tuple[int, int, int]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(COLOR_HEADER + "\n")
        for name in sorted(colors):
            r, g, b = colors[name]
            fh.write(f"{name},{r},{g},{b}\n")
