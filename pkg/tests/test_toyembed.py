import numpy as np
import pytest

from xrank.errors import EmptyTextError
from xrank.toyembed import DEFAULT_DIM, ToyEmbedder
from xrank.types import CorpusRecord, QueryRecord


def test_sentence_vectors_are_unit_norm():
    emb = ToyEmbedder(dim=64, seed=0)
    for text in ("a zebra", "one", "the quick brown fox jumps over the lazy dog"):
        assert np.linalg.norm(emb.embed_sentence(text)) == pytest.approx(1.0)


def test_same_seed_same_vectors():
    a = ToyEmbedder(dim=128, seed=7)
    b = ToyEmbedder(dim=128, seed=7)
    text = "zebras graze across the open grassland"
    assert np.array_equal(a.embed_sentence(text), b.embed_sentence(text))


def test_different_seed_different_vectors():
    text = "zebras graze across the open grassland"
    v0 = ToyEmbedder(dim=128, seed=0).embed_sentence(text)
    v1 = ToyEmbedder(dim=128, seed=1).embed_sentence(text)
    assert not np.array_equal(v0, v1)


def test_bag_semantics():
    emb = ToyEmbedder(dim=64, seed=0)
    assert np.array_equal(emb.embed_sentence("hill tree sky"), emb.embed_sentence("sky hill tree"))
    assert np.array_equal(emb.embed_sentence("Hill TREE sky"), emb.embed_sentence("hill tree sky"))
    # punctuation separates but never lands in a bucket
    assert np.array_equal(emb.embed_sentence("hill, tree; sky."), emb.embed_sentence("hill tree sky"))


def test_repeated_tokens_shift_weight():
    emb = ToyEmbedder(dim=64, seed=0)
    assert not np.array_equal(emb.embed_sentence("zebra zebra field"), emb.embed_sentence("zebra field"))


def test_dim_one_collapses_everything():
    emb = ToyEmbedder(dim=1, seed=0)
    assert emb.embed_sentence("anything at all").tolist() == [1.0]


def test_dim_must_be_positive():
    with pytest.raises(ValueError):
        ToyEmbedder(dim=0)
    with pytest.raises(ValueError):
        ToyEmbedder(dim=-3)
    assert ToyEmbedder().dim == DEFAULT_DIM


def test_empty_text_raises():
    emb = ToyEmbedder(dim=16)
    with pytest.raises(EmptyTextError):
        emb.embed_sentence("")
    with pytest.raises(EmptyTextError):
        emb.embed_sentence("... !?")
    with pytest.raises(EmptyTextError):
        emb.embed_document([])


def test_document_is_mean_of_sentence_vectors():
    emb = ToyEmbedder(dim=64, seed=2)
    s1, s2 = "a zebra grazes", "hills rise behind the field"
    want = (emb.embed_sentence(s1) + emb.embed_sentence(s2)) / 2
    assert np.array_equal(emb.embed_document([s1, s2]), want)
    # means of distinct unit vectors land strictly inside the sphere
    assert np.linalg.norm(emb.embed_document([s1, s2])) < 1.0


def test_duplicate_sentence_equals_single():
    emb = ToyEmbedder(dim=64, seed=2)
    s = "a zebra grazes on the field"
    assert np.array_equal(emb.embed_document([s, s]), emb.embed_document([s]))
    assert np.array_equal(emb.embed_document([s]), emb.embed_sentence(s))


def test_embed_queries_matrix():
    emb = ToyEmbedder(dim=32, seed=0)
    queries = [QueryRecord("q1", "i1", "a zebra"), QueryRecord("q2", "i2", "tall grass")]
    mat = emb.embed_queries(queries)
    assert mat.ids == ("q1", "q2")
    assert mat.rows.shape == (2, 32)
    assert mat.rows.dtype == np.float32
    assert np.array_equal(mat.rows[0], emb.embed_sentence("a zebra").astype(np.float32))


def test_embed_corpora_matrix():
    emb = ToyEmbedder(dim=32, seed=0)
    corpora = [
        CorpusRecord("i1", ("a zebra grazes", "hills rise")),
        CorpusRecord("i2", ("tall grass",)),
    ]
    mat = emb.embed_corpora(corpora)
    assert mat.ids == ("i1", "i2")
    want = emb.embed_document(["a zebra grazes", "hills rise"]).astype(np.float32)
    assert np.array_equal(mat.rows[0], want)


def test_embed_empty_lists():
    emb = ToyEmbedder(dim=16)
    assert emb.embed_queries([]).rows.shape == (0, 16)
    assert emb.embed_corpora([]).ids == ()
