"""Errors raised by the adapter."""


class AdapterError(Exception):
    """Base class for everything this package raises on purpose."""


class ModelLoadError(AdapterError):
    """The sentence encoder could not be constructed."""


class MissingSourceError(AdapterError):
    """A required source file is absent or structurally incomplete."""


class EmptyInputError(AdapterError):
    """An operation that needs at least one record got none."""
