"""
Exact MWIF / MWIT by include-exclude enumeration, for ground truth on small graphs.

Vertices are decided heaviest first. Included vertices live in a union-find
with rollback: adding a vertex whose neighbors already share a component
closes a cycle, so that branch dies immediately.
"""

from __future__ import annotations

import logging

from src import config
from src.models.errors import OracleRefusal
from src.models.graph import Graph
from src.models.solve import OracleResult

logger = logging.getLogger(__name__)


class _RollbackUnionFind:
    """Union by size, no path compression, so every union can be undone."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = 0
        self.history: list[int] = []

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            v = self.parent[v]
        return v

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        self.history.append(rb)

    def rollback(self, mark: int) -> None:
        while len(self.history) > mark:
            rb = self.history.pop()
            ra = self.parent[rb]
            self.size[ra] -= self.size[rb]
            self.parent[rb] = rb
            self.components += 1


class _Enumerator:
    def __init__(self, g: Graph, connected: bool):
        self.g = g
        self.connected = connected
        self.order = sorted(range(g.n), key=lambda v: (-g.weights[v], v))
        self.suffix = [0.0] * (g.n + 1)
        for k in range(g.n - 1, -1, -1):
            self.suffix[k] = self.suffix[k + 1] + g.weights[self.order[k]]
        self.uf = _RollbackUnionFind(g.n)
        self.included = [False] * g.n
        self.chosen: list[int] = []
        self.best_value = 0.0
        self.best_subset: list[int] = []
        self.enumerated = 0

    def run(self) -> OracleResult:
        self._recurse(0, 0.0)
        return OracleResult(
            value=self.best_value, subset=sorted(self.best_subset), enumerated=self.enumerated
        )

    def _recurse(self, k: int, value: float) -> None:
        if value + self.suffix[k] <= self.best_value and self.best_subset:
            return
        if k == len(self.order):
            self.enumerated += 1
            if self.connected and self.uf.components > 1:
                return
            if value > self.best_value or not self.best_subset:
                self.best_value = value
                self.best_subset = list(self.chosen)
            return

        v = self.order[k]
        mark = len(self.uf.history)
        roots = set()
        acyclic = True
        for w in self.g.adjacency[v]:
            if self.included[w]:
                r = self.uf.find(w)
                if r in roots:
                    acyclic = False
                    break
                roots.add(r)
        if acyclic:
            self.included[v] = True
            self.chosen.append(v)
            self.uf.components += 1
            for w in self.g.adjacency[v]:
                if self.included[w] and w != v:
                    self.uf.union(v, w)
            self._recurse(k + 1, value + self.g.weights[v])
            self.uf.rollback(mark)
            self.uf.components -= 1
            self.chosen.pop()
            self.included[v] = False
        self._recurse(k + 1, value)


def _guard(g: Graph) -> None:
    if g.n > config.ORACLE_MAX_N:
        raise OracleRefusal(f"oracle refuses n={g.n} > {config.ORACLE_MAX_N}")


def brute_force_mwif(g: Graph) -> OracleResult:
    _guard(g)
    result = _Enumerator(g, connected=False).run()
    logger.debug(f"Oracle MWIF={result.value:g} after {result.enumerated} leaves")
    return result


def brute_force_mwit(g: Graph) -> OracleResult:
    """Best connected induced forest; the empty set (value 0) only on the empty graph."""
    _guard(g)
    result = _Enumerator(g, connected=True).run()
    logger.debug(f"Oracle MWIT={result.value:g} after {result.enumerated} leaves")
    return result
