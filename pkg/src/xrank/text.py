"""Shared whitespace-and-punctuation tokenization."""

from __future__ import annotations

import re

WORD_RE = re.compile(r"[A-Za-z0-9']+")


def word_spans(text: str) -> list[tuple[int, int, str]]:
    """(start, end, token) for every word token, left to right."""
    return [(m.start(), m.end(), m.group()) for m in WORD_RE.finditer(text)]


def word_tokens(text: str) -> list[str]:
    return WORD_RE.findall(text)
