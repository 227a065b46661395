import random

import numpy as np
import pytest
from oracles import brute_force_matching

from xrank.matching import Matching, max_weight_full_matching, min_weight_full_matching


def random_matrix(rng, max_side=7, integer=True):
    rows = rng.randint(1, max_side)
    cols = rng.randint(1, max_side)
    if integer:  # small integer weights force plenty of ties
        data = [[float(rng.randint(0, 9)) for _ in range(cols)] for _ in range(rows)]
    else:
        data = [[rng.uniform(-5, 5) for _ in range(cols)] for _ in range(rows)]
    return np.array(data)


@pytest.mark.parametrize("maximize", [True, False])
def test_matches_brute_force_with_ties(maximize):
    rng = random.Random(101)
    solver = max_weight_full_matching if maximize else min_weight_full_matching
    for _ in range(200):
        w = random_matrix(rng)
        got = solver(w)
        want_total, want_pairs = brute_force_matching(w, maximize)
        assert got.total == pytest.approx(want_total, abs=1e-9)
        assert got.pairs == want_pairs


@pytest.mark.parametrize("maximize", [True, False])
def test_matches_brute_force_on_floats(maximize):
    rng = random.Random(202)
    solver = max_weight_full_matching if maximize else min_weight_full_matching
    for _ in range(100):
        w = random_matrix(rng, integer=False)
        got = solver(w)
        want_total, want_pairs = brute_force_matching(w, maximize)
        assert got.total == pytest.approx(want_total, abs=1e-9)
        assert got.pairs == want_pairs


def test_negation_duality_exact():
    rng = random.Random(303)
    for _ in range(100):
        w = random_matrix(rng)
        hi = max_weight_full_matching(w)
        lo = min_weight_full_matching(-w)
        assert hi.total == -lo.total
        assert hi.pairs == lo.pairs


def test_constant_shift_preserves_pairs():
    rng = random.Random(404)
    for _ in range(50):
        w = random_matrix(rng, max_side=5)
        base = min_weight_full_matching(w)
        shifted = min_weight_full_matching(w + 13.5)
        assert shifted.pairs == base.pairs
        assert shifted.total == pytest.approx(base.total + 13.5 * len(base.pairs), abs=1e-9)


def test_single_row_picks_best_column():
    m = min_weight_full_matching(np.array([[4.0, 2.3, 7.0, 2.3, 9.0]]))
    assert m.pairs == ((0, 1),)  # 2.3 twice, smaller column index wins
    assert m.total == 2.3
    m = max_weight_full_matching(np.array([[4.0, 2.3, 9.0, 2.3, 9.0]]))
    assert m.pairs == ((0, 2),)


def test_tall_matrix_matches_column_count():
    w = np.array([[d + 1.0, 8.0 - d] for d in range(8)])
    m = min_weight_full_matching(w)
    assert len(m.pairs) == 2
    assert m.pairs == ((0, 0), (7, 1))
    assert m.total == 1.0 + 1.0


def test_all_equal_weights_pick_identity():
    m = max_weight_full_matching(np.ones((4, 4)))
    assert m.pairs == ((0, 0), (1, 1), (2, 2), (3, 3))
    assert m.total == 4.0


def test_matching_total_uses_original_weights():
    w = np.array([[0.5, 2.0], [2.0, 0.25]])
    m = min_weight_full_matching(w)
    assert m == Matching(pairs=((0, 0), (1, 1)), total=0.75)


def test_rejects_empty_and_non_finite():
    with pytest.raises(ValueError):
        min_weight_full_matching(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        min_weight_full_matching(np.array([[np.inf, 1.0]]))
    with pytest.raises(ValueError):
        min_weight_full_matching(np.array([1.0, 2.0]))
