import os

import pytest

from xrank import ingest
from xrank.wordnet import SynsetGraph

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA, name)


@pytest.fixture(scope="session")
def fixture_graph() -> SynsetGraph:
    return SynsetGraph.from_file(data_path("wordnet_fixture.tsv"))


@pytest.fixture(scope="session")
def e2e_annotations():
    return {a.image_id: a for a in ingest.read_annotations(data_path("e2e_annotations.jsonl"))}


@pytest.fixture(scope="session")
def e2e_queries():
    return ingest.read_queries(data_path("e2e_queries.jsonl"))


@pytest.fixture(scope="session")
def e2e_corpora():
    return ingest.read_corpora(data_path("e2e_corpora.jsonl"))


@pytest.fixture(scope="session")
def color_table():
    return ingest.read_color_table(data_path("colors.csv"))
