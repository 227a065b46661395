"""Extract a noun taxonomy and adjective antonym pairs from WordNet.

Reads the classic dict-directory layout (data.noun, index.noun, data.adj)
directly, so no lexical-database package is needed at run time.  The file
format is positional and a little arcane; the parsing below follows the
wndb(5) description:

  data line:   offset lex_filenum ss_type w_cnt (word lex_id)... p_cnt
               (symbol offset pos source/target)... | gloss
  index line:  lemma pos synset_cnt p_cnt symbol... sense_cnt
               tagsense_cnt offset...

w_cnt is two hexadecimal digits, p_cnt three decimal digits, and
source/target two hex bytes naming the word on each side of a lexical
pointer (00 means the pointer covers the whole synset).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .errors import MissingSourceError
from .formats import write_synset_graph

# pointer symbols for "is a kind of" (plain and instance)
_HYPERNYM_SYMBOLS = ("@", "@i")
_ANTONYM_SYMBOL = "!"

_REQUIRED_FILES = ("data.noun", "index.noun", "data.adj")


@dataclass(frozen=True)
class _Pointer:
    symbol: str
    target_offset: int
    pos: str
    source_word: int  # 1-based, 0 for semantic pointers
    target_word: int


@dataclass(frozen=True)
class _Synset:
    offset: int
    words: tuple[str, ...]
    pointers: tuple[_Pointer, ...]


def _clean_lemma(word: str) -> str:
    # adjective words carry positional markers like "(p)"; drop them
    return word.split("(")[0].lower()


def _data_lines(path: Path):
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            # the license block is indented; data lines never are
            if line.startswith(" "):
                continue
            yield line.rstrip("\n")


def parse_data(path: Path) -> dict[int, _Synset]:
    """Parse one data.* file into synsets keyed by byte offset."""
    synsets: dict[int, _Synset] = {}
    for line in _data_lines(path):
        head = line.split(" | ")[0]
        parts = head.split()
        offset = int(parts[0])
        w_cnt = int(parts[3], 16)
        words = tuple(parts[4 + 2 * i] for i in range(w_cnt))
        cursor = 4 + 2 * w_cnt
        p_cnt = int(parts[cursor])
        cursor += 1
        pointers = []
        for _ in range(p_cnt):
            symbol, target, pos, st = parts[cursor : cursor + 4]
            pointers.append(
                _Pointer(
                    symbol=symbol,
                    target_offset=int(target),
                    pos=pos,
                    source_word=int(st[:2], 16),
                    target_word=int(st[2:], 16),
                )
            )
            cursor += 4
        synsets[offset] = _Synset(offset=offset, words=words, pointers=tuple(pointers))
    return synsets


def parse_index(path: Path) -> dict[str, list[int]]:
    """Parse index.* into lemma -> offsets, in sense order."""
    index: dict[str, list[int]] = {}
    for line in _data_lines(path):
        parts = line.split()
        lemma = parts[0]
        p_cnt = int(parts[3])
        index[lemma] = [int(part) for part in parts[6 + p_cnt :]]
    return index


def _synset_name(synset: _Synset, index: dict[str, list[int]], path: Path) -> str:
    lemma = _clean_lemma(synset.words[0])
    offsets = index.get(lemma)
    if offsets is None or synset.offset not in offsets:
        raise MissingSourceError(
            f"{path}: no index entry maps {lemma!r} to offset {synset.offset}"
        )
    sense = offsets.index(synset.offset) + 1
    if sense > 99:
        raise ValueError(f"sense number {sense} for {lemma!r} does not fit two digits")
    return f"{lemma}.n.{sense:02d}"


def export_wordnet(dict_dir: str | Path, out_path: str | Path) -> tuple[int, int, int]:
    """Write the taxonomy file and return (nodes, edges, antonym pairs)."""
    dict_dir = Path(dict_dir)
    if not dict_dir.is_dir():
        raise MissingSourceError(f"{dict_dir} is not a directory")
    missing = [name for name in _REQUIRED_FILES if not os.path.exists(dict_dir / name)]
    if missing:
        raise MissingSourceError(f"{dict_dir} lacks {', '.join(missing)}")

    nouns = parse_data(dict_dir / "data.noun")
    index = parse_index(dict_dir / "index.noun")

    names: dict[int, str] = {}
    seen: set[str] = set()
    for offset, synset in nouns.items():
        name = _synset_name(synset, index, dict_dir / "index.noun")
        if name in seen:
            raise ValueError(f"synset name collision on {name!r}")
        seen.add(name)
        names[offset] = name

    edges = []
    for synset in nouns.values():
        for pointer in synset.pointers:
            if pointer.symbol not in _HYPERNYM_SYMBOLS or pointer.pos != "n":
                continue
            if pointer.target_offset not in names:
                raise MissingSourceError(
                    f"hypernym target {pointer.target_offset} of "
                    f"{names[synset.offset]} is not in data.noun"
                )
            edges.append((names[synset.offset], names[pointer.target_offset]))

    adjectives = parse_data(dict_dir / "data.adj")
    pairs: set[tuple[str, str]] = set()
    for synset in adjectives.values():
        for pointer in synset.pointers:
            if pointer.symbol != _ANTONYM_SYMBOL:
                continue
            # antonymy is lexical; a semantic pointer has no word pair
            if pointer.source_word == 0 or pointer.target_word == 0:
                continue
            target = adjectives.get(pointer.target_offset)
            if target is None:
                raise MissingSourceError(
                    f"antonym target {pointer.target_offset} is not in data.adj"
                )
            first = _clean_lemma(synset.words[pointer.source_word - 1])
            second = _clean_lemma(target.words[pointer.target_word - 1])
            if first != second:
                pairs.add(tuple(sorted((first, second))))

    write_synset_graph(out_path, names.values(), edges, pairs)
    return len(names), len(edges), len(pairs)
