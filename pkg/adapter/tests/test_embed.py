import numpy as np
import pytest

from xrank_adapter.embed import ModelSpec, embed_corpora, embed_queries
from xrank_adapter.errors import EmptyInputError, ModelLoadError
from xrank_adapter.formats import CorpusRow, PerturbedRow, QueryRow

from conftest import StubEncoder


def test_model_spec_validation():
    with pytest.raises(ValueError):
        ModelSpec("")
    with pytest.raises(ValueError):
        ModelSpec("m", batch_size=0)
    spec = ModelSpec("m")
    assert spec.batch_size == 32
    assert spec.device is None


def test_model_spec_load_failure_names_the_model(monkeypatch):
    # keep the hub client from retrying against the network
    monkeypatch.setenv("HF_HUB_OFFLINE", "1")
    with pytest.raises(ModelLoadError, match="no-such-model-xyz"):
        ModelSpec("no-such-model-xyz").load()


def test_embed_queries_keeps_order_and_dtype(stub):
    queries = [
        QueryRow("q1", "i1", "a zebra on a hill"),
        QueryRow("q2", "i2", "red kite"),
    ]
    ids, rows = embed_queries(queries, stub)
    assert ids == ["q1", "q2"]
    assert rows.dtype == np.float32
    assert rows.shape == (2, stub.dim)
    assert rows[0].tobytes() == stub._vector("a zebra on a hill").tobytes()
    assert rows[1].tobytes() == stub._vector("red kite").tobytes()


def test_embed_queries_accepts_perturbed_rows(stub):
    ids, rows = embed_queries([PerturbedRow("q1", "small cat")], stub)
    assert ids == ["q1"]
    assert rows.shape == (1, stub.dim)


def test_embed_queries_rejects_empty(stub):
    with pytest.raises(EmptyInputError):
        embed_queries([], stub)


def test_embed_corpora_rejects_empty(stub):
    with pytest.raises(EmptyInputError):
        embed_corpora([], stub)


def test_corpus_row_is_mean_of_sentence_vectors(stub):
    corpora = [CorpusRow("i1", ("a zebra", "green grass"))]
    ids, rows = embed_corpora(corpora, stub)
    assert ids == ["i1"]
    u = stub._vector("a zebra").astype(np.float64)
    v = stub._vector("green grass").astype(np.float64)
    expected = ((u + v) / 2).astype(np.float32)
    assert rows[0].tobytes() == expected.tobytes()


def test_single_sentence_row_equals_its_vector(stub):
    _, rows = embed_corpora([CorpusRow("i1", ("a zebra",))], stub)
    assert rows[0].tobytes() == stub._vector("a zebra").tobytes()


def test_repeated_sentence_row_equals_single_sentence_row(stub):
    _, repeated = embed_corpora([CorpusRow("i1", ("a zebra",) * 3)], stub)
    _, single = embed_corpora([CorpusRow("i1", ("a zebra",))], stub)
    assert repeated[0].tobytes() == single[0].tobytes()


def test_corpora_encode_each_distinct_sentence_once(stub):
    corpora = [
        CorpusRow("i1", ("alpha", "beta", "alpha")),
        CorpusRow("i2", ("beta", "gamma")),
    ]
    embed_corpora(corpora, stub)
    assert stub.calls == [["alpha", "beta", "gamma"]]


def test_corpus_rows_do_not_depend_on_neighbors(stub):
    target = CorpusRow("i1", ("a zebra", "green grass"))
    _, alone = embed_corpora([target], StubEncoder())
    _, crowded = embed_corpora(
        [CorpusRow("i0", ("something else",)), target], StubEncoder()
    )
    assert alone[0].tobytes() == crowded[1].tobytes()


class RaggedEncoder:
    def encode(self, texts, batch_size=32):
        return np.zeros((len(texts) + 1, 4), dtype=np.float32)


class FlatEncoder:
    def encode(self, texts, batch_size=32):
        return np.zeros((len(texts), 0), dtype=np.float32)


def test_encoder_shape_is_checked():
    with pytest.raises(ValueError, match="shape"):
        embed_queries([QueryRow("q1", "i1", "x")], RaggedEncoder())
    with pytest.raises(ValueError, match="zero-dimensional"):
        embed_queries([QueryRow("q1", "i1", "x")], FlatEncoder())
