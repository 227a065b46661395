"""Synset graph with path similarity and an adjective antonym table.

Similarity between two synsets is 1 / (1 + d) where d is the shortest path
length over undirected hypernym edges. Unreachable pairs have no similarity.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from . import ingest
from .errors import UnknownSynsetError

_DISTANCE_CACHE_SIZE = 1 << 20


class SynsetGraph:
    """Undirected view of a hypernym DAG plus a lemma-level antonym map.

    The antonym relation is symmetrized at load time, so antonyms_of(a)
    containing b implies antonyms_of(b) contains a regardless of which
    direction the source file stored.
    """

    def __init__(
        self,
        nodes: list[str],
        edges: list[tuple[str, str]],
        antonyms: list[tuple[str, str]] | None = None,
    ):
        self._nodes = frozenset(nodes)
        adj: dict[str, set[str]] = {n: set() for n in nodes}
        for child, parent in edges:
            if child not in self._nodes or parent not in self._nodes:
                raise UnknownSynsetError(f"edge endpoint not a node: {child!r} -> {parent!r}")
            adj[child].add(parent)
            adj[parent].add(child)
        # frozen adjacency, neighbors sorted for deterministic traversal
        self._adj = {n: tuple(sorted(members)) for n, members in adj.items()}
        table: dict[str, set[str]] = {}
        for a, b in antonyms or []:
            table.setdefault(a, set()).add(b)
            table.setdefault(b, set()).add(a)
        self._antonyms = {lemma: frozenset(opp) for lemma, opp in table.items()}
        self._distance = lru_cache(maxsize=_DISTANCE_CACHE_SIZE)(self._bfs_distance)

    @classmethod
    def from_file(cls, path: str) -> "SynsetGraph":
        nodes, edges, antonyms = ingest.read_synset_graph(path)
        return cls(nodes, edges, antonyms)

    def __contains__(self, synset: str) -> bool:
        return synset in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    @property
    def nodes(self) -> frozenset[str]:
        return self._nodes

    def _bfs_distance(self, a: str, b: str) -> int | None:
        # plain BFS with early exit; a < b by construction of the cache key
        seen = {a}
        frontier: deque[str] = deque((a,))
        dist = 0
        while frontier:
            dist += 1
            for _ in range(len(frontier)):
                node = frontier.popleft()
                for neighbor in self._adj[node]:
                    if neighbor == b:
                        return dist
                    if neighbor not in seen:
                        seen.add(neighbor)
                        frontier.append(neighbor)
        return None

    def distance(self, a: str, b: str) -> int | None:
        """Edge count of the shortest undirected path, None if unreachable."""
        for synset in (a, b):
            if synset not in self._nodes:
                raise UnknownSynsetError(f"unknown synset {synset!r}")
        if a == b:
            return 0
        if a > b:
            a, b = b, a
        return self._distance(a, b)

    def path_similarity(self, a: str, b: str) -> float | None:
        """1 / (1 + distance); None when no path connects a and b."""
        d = self.distance(a, b)
        if d is None:
            return None
        return 1.0 / (1.0 + d)

    def antonyms_of(self, lemma: str) -> frozenset[str]:
        """Antonym lemmas; empty for lemmas the table does not know."""
        return self._antonyms.get(lemma, frozenset())

    def has_antonyms(self, lemma: str) -> bool:
        return lemma in self._antonyms
