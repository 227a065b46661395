"""Optimal full matchings in complete bipartite graphs.

One Kuhn-Munkres kernel with row/column potentials, O(n^3). Maximization is
minimization of the negated matrix; rectangular inputs are padded virtually
to square with zero-weight slots, so the result always has min(L, R) pairs
and the solver decides which side's surplus stays unmatched.

Ties between equally weighted optima are broken deterministically: among all
optimal full matchings the one whose sorted pair list is lexicographically
smallest is returned. That set of optima is exactly the set of perfect
matchings of the tight subgraph (zero reduced cost under the final
potentials), which makes the tie-break a cheap second pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Matching:
    """Pairs of (left, right) indices plus the summed weight."""

    pairs: tuple[tuple[int, int], ...]
    total: float


def _as_weight_matrix(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] == 0 or w.shape[1] == 0:
        raise ValueError(f"weights must be a non-empty 2-D matrix, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    return w


def _solve_square(cost: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Minimum-cost perfect matching on a square matrix.

    Returns (p, u, v) with 1-based indexing: p[j] is the row matched to
    column j, and (u, v) are dual-feasible potentials with matched edges
    tight, so any optimal matching lives inside the tight subgraph.
    """
    n = cost.shape[0]
    inf = np.inf
    cost1 = np.full((n + 1, n + 1), inf, dtype=np.float64)
    cost1[1:, 1:] = cost

    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    minv = np.empty(n + 1)

    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv[:] = inf
        way[:] = 0
        used_cols: list[int] = []
        tree_rows: list[int] = []
        while True:
            used_cols.append(j0)
            tree_rows.append(int(p[j0]))
            minv[j0] = inf
            i0 = int(p[j0])
            cur = cost1[i0] - u[i0] - v
            cur[used_cols] = inf
            improved = cur < minv
            way[improved] = j0
            np.minimum(minv, cur, out=minv)
            j1 = int(np.argmin(minv))
            delta = float(minv[j1])
            u[tree_rows] += delta
            v[used_cols] -= delta
            minv -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = int(way[j0])
            p[j0] = p[j1]
            j0 = j1
    return p, u, v


def _lexicographic_refine(
    tight: np.ndarray, match: np.ndarray, owner: np.ndarray, n_left: int
) -> None:
    """Rewrite match/owner in place into the lexicographically smallest
    perfect matching of the tight graph, fixing real rows in ascending order.
    """
    tight_cols = [np.nonzero(tight[r])[0] for r in range(tight.shape[0])]

    def augment(row: int, fixed_below: int, visited: set[int]) -> bool:
        for c in tight_cols[row]:
            c = int(c)
            if c in visited:
                continue
            visited.add(c)
            holder = int(owner[c])
            if holder == -1 or (holder > fixed_below and augment(holder, fixed_below, visited)):
                owner[c] = row
                match[row] = c
                return True
        return False

    for l in range(n_left):
        current = int(match[l])
        for c in tight_cols[l]:
            c = int(c)
            if c == current:
                break
            displaced = int(owner[c])
            if displaced <= l and displaced != -1:
                continue  # column held by an already fixed row
            owner[current] = -1
            owner[c] = l
            match[l] = c
            if displaced == -1 or augment(displaced, l, {c}):
                break
            # revert and try the next column
            owner[c] = displaced
            owner[current] = l
            match[l] = current


def _solve(weights: np.ndarray, maximize: bool) -> Matching:
    n_left, n_right = weights.shape
    n = max(n_left, n_right)
    cost = np.zeros((n, n), dtype=np.float64)
    cost[:n_left, :n_right] = -weights if maximize else weights

    p, u, v = _solve_square(cost)

    match = np.full(n, -1, dtype=np.int64)  # row -> col, 0-based
    owner = np.full(n, -1, dtype=np.int64)  # col -> row, 0-based
    for j in range(1, n + 1):
        match[p[j] - 1] = j - 1
        owner[j - 1] = p[j] - 1

    eps = 1e-9 * max(1.0, float(np.abs(cost).max()))
    slack = cost - u[1:, None] - v[None, 1:]
    tight = slack <= eps
    # matched edges are tight up to rounding; force them in to be safe
    tight[np.arange(n), match] = True

    _lexicographic_refine(tight, match, owner, n_left)

    pairs = tuple((l, int(match[l])) for l in range(n_left) if match[l] < n_right)
    total = float(sum(weights[l, r] for l, r in pairs))
    return Matching(pairs=pairs, total=total)


def max_weight_full_matching(weights) -> Matching:
    """Full matching (min(L, R) pairs) maximizing the summed weight."""
    return _solve(_as_weight_matrix(weights), maximize=True)


def min_weight_full_matching(weights) -> Matching:
    """Full matching (min(L, R) pairs) minimizing the summed weight."""
    return _solve(_as_weight_matrix(weights), maximize=False)
