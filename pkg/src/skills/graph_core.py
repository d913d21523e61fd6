"""
Graph operations: dummy-root transformation, orientation and
induced-subgraph predicates.

This is a pure skill module: no I/O.
"""

from __future__ import annotations

from collections.abc import Iterable

import networkx as nx

from src.models.errors import GraphError
from src.models.graph import Digraph, Graph, TransformedGraph


def transform(g: Graph) -> TransformedGraph:
    """Return G_s. The base graph is shared, not modified."""
    return TransformedGraph(base=g, s=g.n)


def orient(gs: TransformedGraph) -> Digraph:
    """
    Build the directed graph of G_s.

    Arcs are sorted by (u, v), so root arcs (s, v) come last since s = n.
    There is no arc (v, s).
    """
    n = gs.base.n
    s = gs.s
    arcs: list[tuple[int, int]] = []
    for u, v in gs.base.edges:
        arcs.append((u, v))
        arcs.append((v, u))
    arcs.extend((s, v) for v in range(n))
    arcs.sort()

    out_arcs: list[list[int]] = [[] for _ in range(n + 1)]
    in_arcs: list[list[int]] = [[] for _ in range(n + 1)]
    for idx, (u, v) in enumerate(arcs):
        out_arcs[u].append(idx)
        in_arcs[v].append(idx)

    return Digraph(
        n_vertices=n + 1,
        s=s,
        arcs=tuple(arcs),
        out_arcs=tuple(tuple(a) for a in out_arcs),
        in_arcs=tuple(tuple(a) for a in in_arcs),
    )


def _checked(g: Graph, subset: Iterable[int]) -> set[int]:
    chosen = set(subset)
    for v in chosen:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} not in graph with n={g.n}")
    return chosen


def is_forest(g: Graph, subset: Iterable[int]) -> bool:
    """True iff the subgraph induced by `subset` has no cycle."""
    chosen = _checked(g, subset)
    if len(chosen) <= 2:
        return True
    return nx.is_forest(g.nx_graph.subgraph(chosen))


def is_tree(g: Graph, subset: Iterable[int]) -> bool:
    """True iff the subgraph induced by `subset` is connected and acyclic."""
    chosen = _checked(g, subset)
    if not chosen:
        raise GraphError("a tree must have at least one vertex")
    return nx.is_tree(g.nx_graph.subgraph(chosen))


def subset_weight(g: Graph, subset: Iterable[int]) -> float:
    return float(sum(g.weights[v] for v in _checked(g, subset)))


def induced_components(g: Graph, subset: Iterable[int]) -> list[set[int]]:
    """Connected components of G[subset]."""
    chosen = _checked(g, subset)
    return [set(c) for c in nx.connected_components(g.nx_graph.subgraph(chosen))]
