"""
Graph types: the undirected vertex-weighted input graph, the dummy-root
transformation G_s and its directed version.

Vertices are dense 0-based integers; the dummy root s is always index n.
"""

from __future__ import annotations

from functools import cached_property

import networkx as nx
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from src.models.errors import GraphError


class Graph(BaseModel):
    """Undirected simple graph with nonnegative vertex weights."""

    model_config = ConfigDict(frozen=True)

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    weights: tuple[float, ...]

    @model_validator(mode="after")
    def _check_invariants(self) -> "Graph":
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(self.adjacency) != self.n:
            raise ValueError(f"adjacency has {len(self.adjacency)} lists for n={self.n}")
        if len(self.weights) != self.n:
            raise ValueError(f"got {len(self.weights)} weights for n={self.n}")
        for v, nbrs in enumerate(self.adjacency):
            if self.weights[v] < 0:
                raise ValueError(f"vertex {v} has negative weight {self.weights[v]}")
            prev = -1
            for u in nbrs:
                if u <= prev:
                    raise ValueError(f"neighbors of {v} not strictly increasing")
                if u == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if not 0 <= u < self.n:
                    raise ValueError(f"neighbor {u} of {v} out of range")
                prev = u
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if v not in self.neighbor_sets[u]:
                    raise ValueError(f"adjacency not symmetric for edge {v}-{u}")
        return self

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: list[tuple[int, int]] | set[tuple[int, int]],
        weights: list[float] | tuple[float, ...],
    ) -> "Graph":
        """Build from an edge list. Raises GraphError on duplicates, self-loops or bad endpoints."""
        adj: list[list[int]] = [[] for _ in range(max(n, 0))]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range for n={n}")
            adj[u].append(v)
            adj[v].append(u)
        try:
            return cls(
                n=n,
                adjacency=tuple(tuple(sorted(a)) for a in adj),
                weights=tuple(float(w) for w in weights),
            )
        except ValidationError as e:
            raise GraphError(e.errors()[0]["msg"]) from None

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as (u, v) with u < v, lexicographically sorted."""
        return tuple((u, v) for u in range(self.n) for v in self.adjacency[u] if u < v)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


class TransformedGraph(BaseModel):
    """G_s: the base graph plus a zero-weight root s adjacent to every vertex."""

    model_config = ConfigDict(frozen=True)

    base: Graph
    s: int

    @model_validator(mode="after")
    def _check_root(self) -> "TransformedGraph":
        if self.s != self.base.n:
            raise ValueError(f"dummy vertex must be index {self.base.n}, got {self.s}")
        return self

    @property
    def n_vertices(self) -> int:
        return self.base.n + 1

    @cached_property
    def graph(self) -> Graph:
        """G_s as a plain Graph (w_s = 0)."""
        n = self.base.n
        adjacency = tuple(nbrs + (n,) for nbrs in self.base.adjacency) + (tuple(range(n)),)
        return Graph(n=n + 1, adjacency=adjacency, weights=self.base.weights + (0.0,))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """E_s = E followed by the root edges (v, s) in vertex order."""
        return self.base.edges + tuple((v, self.s) for v in range(self.base.n))


class Digraph(BaseModel):
    """Directed version of G_s: arcs (u,v),(v,u) per base edge and (s,v) per vertex."""

    model_config = ConfigDict(frozen=True)

    n_vertices: int
    s: int
    arcs: tuple[tuple[int, int], ...]
    out_arcs: tuple[tuple[int, ...], ...]
    in_arcs: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_indices(self) -> "Digraph":
        seen_out = sorted(a for lst in self.out_arcs for a in lst)
        seen_in = sorted(a for lst in self.in_arcs for a in lst)
        expected = list(range(len(self.arcs)))
        if seen_out != expected or seen_in != expected:
            raise ValueError("out/in arc indices do not partition the arc list")
        for idx, (u, v) in enumerate(self.arcs):
            if idx not in self.out_arcs[u] or idx not in self.in_arcs[v]:
                raise ValueError(f"arc {idx}=({u},{v}) indexed inconsistently")
        return self

    @cached_property
    def arc_index(self) -> dict[tuple[int, int], int]:
        return {arc: idx for idx, arc in enumerate(self.arcs)}
