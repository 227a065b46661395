"""Exception types shared across the toolkit."""

from __future__ import annotations


class XRankError(Exception):
    """Base class for all toolkit-specific errors."""


class ParseError(XRankError):
    """A record in an input file is malformed.

    Carries the 1-based line number when the source is line-oriented.
    """

    def __init__(self, reason: str, line: int | None = None, path: str | None = None):
        self.reason = reason
        self.line = line
        self.path = path
        loc = ""
        if path is not None:
            loc += f"{path}"
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {reason}" if loc else reason)


class DuplicateIdError(XRankError):
    """An identifier that must be unique appeared twice."""


class BadMagicError(XRankError):
    """Binary file does not start with the expected magic bytes."""


class TruncatedFileError(XRankError):
    """Binary file ended before the declared payload was complete."""


class CountMismatchError(XRankError):
    """Binary file header count disagrees with the rows actually present."""


class ZeroNormError(XRankError):
    """An embedding row has zero norm and cannot be used for cosine math."""


class DimMismatchError(XRankError):
    """Two embedding collections disagree on dimensionality."""


class UnknownSynsetError(XRankError):
    """A synset id is not a node of the loaded graph."""


class EmptyInputError(XRankError):
    """An aggregate was requested over an empty collection."""


class EmptyTextError(XRankError):
    """A text to embed or perturb contains no tokens."""


class NoDistantColorError(XRankError):
    """No replacement color satisfies the distance threshold."""


class MissingQueryError(XRankError):
    """A query id referenced by the caller is absent from a result set."""


class EmptyGroundTruthError(XRankError):
    """The ground-truth image carries no concept annotations."""
