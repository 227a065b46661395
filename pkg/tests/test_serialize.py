import json

import pytest

from xrank.adversarial import PerturbedQuery, RerankDelta, Substitution
from xrank.errors import ParseError
from xrank.explain import FailureExplanation, SizeDisagreement
from xrank.ranker import RankResult
from xrank.serialize import (
    RANKS_CSV_HEADER,
    delta_to_dict,
    dump_json,
    read_explanations,
    read_failures,
    read_perturbed,
    write_explanations,
    write_failures,
    write_perturbed,
    write_ranks_csv,
)
from xrank.types import FailureRecord

FAILURES = [
    FailureRecord("q01", "img01", "img02", 12),
    FailureRecord("qé", "imgA", "imgB", 2),
]

EXPLANATION = FailureExplanation(
    query_id="q01",
    gt_image_id="img01",
    retrieved_image_id="img02",
    gt_rank=12,
    ca=3 / 11,
    ncs=0.1388888888888889,
    ncs_pairs=(("hill.n.01", "grassland.n.01", 1 / 9), ("tree.n.01", "grass.n.01", 1 / 6)),
    ce=6,
    sd=SizeDisagreement(binary_count=2, match_count=6, sd_avg=1 / 3, sd_optimistic=3.736916666666666),
)

PERTURBED = PerturbedQuery(
    query_id="q01",
    original_text="a large red truck",
    perturbed_text="a small blue truck",
    substitutions=(Substitution(1, "large", "small"), Substitution(2, "red", "blue")),
)


def test_dump_json_is_stable_and_readable():
    text = dump_json({"b": 1, "a": [1.5, None]})
    assert text == '{\n  "a": [\n    1.5,\n    null\n  ],\n  "b": 1\n}\n'
    assert dump_json({"name": "café"}) == '{\n  "name": "café"\n}\n'


def test_failures_round_trip(tmp_path):
    path = tmp_path / "failures.jsonl"
    write_failures(str(path), FAILURES)
    assert read_failures(str(path)) == FAILURES
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["gt_rank"] == 12


def test_failures_reject_bad_rows(tmp_path):
    path = tmp_path / "failures.jsonl"
    path.write_text('{"query_id":"q","gt_image_id":"a","gt_rank":3}\n', encoding="utf-8")
    with pytest.raises(ParseError) as err:
        read_failures(str(path))
    assert err.value.line == 1
    path.write_text('{"query_id":"q","gt_image_id":"a","retrieved_image_id":"b","gt_rank":1}\n')
    with pytest.raises(ParseError):
        read_failures(str(path))  # a rank of 1 is not a failure


def test_jsonl_rejects_blank_and_malformed_lines(tmp_path):
    path = tmp_path / "failures.jsonl"
    good = '{"query_id":"q","gt_image_id":"a","retrieved_image_id":"b","gt_rank":2}'
    path.write_text(f"{good}\n\n{good}\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        read_failures(str(path))
    assert err.value.line == 2
    path.write_text("not json\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_failures(str(path))


def test_explanations_round_trip(tmp_path):
    path = tmp_path / "explanations.jsonl"
    no_pairs = FailureExplanation(
        query_id="q02",
        gt_image_id="img03",
        retrieved_image_id="img04",
        gt_rank=2,
        ca=1.0,
        ncs=None,
        ncs_pairs=(),
        ce=0,
        sd=SizeDisagreement(binary_count=0, match_count=0, sd_avg=None, sd_optimistic=0.0),
    )
    write_explanations(str(path), [EXPLANATION, no_pairs])
    back = read_explanations(str(path))
    assert back == [EXPLANATION, no_pairs]
    assert back[0].ncs_pairs[0][2] == 1 / 9  # float survives exactly via repr round trip


def test_explanations_reject_missing_sd(tmp_path):
    path = tmp_path / "explanations.jsonl"
    row = {"query_id": "q", "gt_image_id": "a", "retrieved_image_id": "b", "gt_rank": 2,
           "ca": 0.5, "ncs": None, "ncs_pairs": [], "ce": 0}
    path.write_text(json.dumps(row) + "\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_explanations(str(path))


def test_perturbed_round_trip(tmp_path):
    path = tmp_path / "perturbed.jsonl"
    write_perturbed(str(path), [PERTURBED])
    assert read_perturbed(str(path)) == [PERTURBED]
    row = json.loads(path.read_text(encoding="utf-8"))
    assert row["substitutions"] == [[1, "large", "small"], [2, "red", "blue"]]


def test_perturbed_rejects_short_substitution(tmp_path):
    path = tmp_path / "perturbed.jsonl"
    path.write_text(
        '{"query_id":"q","original_text":"a","perturbed_text":"b","substitutions":[[1,"x"]]}\n',
        encoding="utf-8",
    )
    with pytest.raises(ParseError):
        read_perturbed(str(path))


def test_ranks_csv(tmp_path):
    path = tmp_path / "ranks.csv"
    results = [
        RankResult("q1", "img1", 1, ("img1", "img2")),
        RankResult("q2", "img2", 2, ("img1", "img2")),
    ]
    write_ranks_csv(str(path), results)
    assert path.read_text(encoding="utf-8") == (
        RANKS_CSV_HEADER + "\nq1,1,img1\nq2,2,img1\n"
    )


def test_delta_dict_keys():
    assert delta_to_dict(RerankDelta(3, 100 / 3, 100 / 3, 100 / 3)) == {
        "n_perturbed": 3,
        "lower_pct": pytest.approx(100 / 3),
        "higher_pct": pytest.approx(100 / 3),
        "same_pct": pytest.approx(100 / 3),
    }
