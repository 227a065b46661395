"""Produce xrank inputs: real sentence embeddings plus taxonomy and color tables."""

__version__ = "0.1.0"

from .colors import export_colors
from .embed import ModelSpec, embed_corpora, embed_queries
from .errors import AdapterError, EmptyInputError, MissingSourceError, ModelLoadError
from .wndb import export_wordnet

__all__ = [
    "AdapterError",
    "EmptyInputError",
    "MissingSourceError",
    "ModelLoadError",
    "ModelSpec",
    "embed_corpora",
    "embed_queries",
    "export_colors",
    "export_wordnet",
    "__version__",
]
