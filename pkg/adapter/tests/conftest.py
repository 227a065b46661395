import shutil
from hashlib import blake2b
from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).parent / "data"


class StubEncoder:
    """Deterministic stand-in for a sentence model.

    Hashes whitespace tokens into signed buckets and normalizes, so equal
    texts always get bitwise-equal vectors and the suite never needs
    model weights.  Calls are recorded for assertions about batching.
    """

    def __init__(self, dim: int = 48, salt: str = ""):
        self.dim = dim
        self.salt = salt
        self.calls: list[list[str]] = []

    def encode(self, texts, batch_size: int = 32):
        self.calls.append(list(texts))
        rows = np.empty((len(texts), self.dim), dtype=np.float32)
        for i, text in enumerate(texts):
            rows[i] = self._vector(text)
        return rows

    def _vector(self, text: str) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.float64)
        for token in text.lower().split():
            digest = blake2b(f"{self.salt}:{token}".encode(), digest_size=8).digest()
            bucket = int.from_bytes(digest[:4], "big") % self.dim
            v[bucket] += 1.0 if digest[4] % 2 == 0 else -1.0
        norm = np.linalg.norm(v)
        if norm == 0.0:
            v[0], norm = 1.0, 1.0
        return (v / norm).astype(np.float32)


@pytest.fixture()
def stub() -> StubEncoder:
    return StubEncoder()


@pytest.fixture(scope="session")
def dict_dir() -> Path:
    path = DATA_DIR / "dict"
    assert path.is_dir(), "dictionary fixture missing"
    return path


@pytest.fixture(scope="session")
def xrank_bin() -> str:
    """The consumer CLI; the conformance tests are meaningless without it."""
    path = shutil.which("xrank")
    if path is None:
        pytest.fail("the xrank package must be installed to run these tests")
    return path
