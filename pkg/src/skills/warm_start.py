"""
Greedy induced-forest heuristic, used as warm start and to repair rounded LP points.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable

import networkx as nx

from src.models.graph import Graph
from src.skills.graph_core import induced_components, is_forest, subset_weight

logger = logging.getLogger(__name__)


def greedy_warm_start(g: Graph, subset: Iterable[int] | None = None) -> list[int]:
    """
    Break cycles by deleting the vertex with the lowest w_v / deg(v) in G[S]
    (ties: lower index), then re-add deleted vertices heaviest first while
    S stays a forest. S starts from `subset`, or from V.
    """
    chosen = set(range(g.n)) if subset is None else set(subset)
    removed: list[int] = []
    while True:
        sub = g.nx_graph.subgraph(chosen)
        try:
            cycle = nx.find_cycle(sub)
        except nx.NetworkXNoCycle:
            break
        on_cycle = {u for u, _ in cycle}
        victim = min(on_cycle, key=lambda v: (g.weights[v] / sub.degree(v), v))
        chosen.remove(victim)
        removed.append(victim)

    for v in sorted(removed, key=lambda v: (-g.weights[v], v)):
        if is_forest(g, chosen | {v}):
            chosen.add(v)

    logger.debug(f"Greedy forest: {len(chosen)} vertices, weight {subset_weight(g, chosen):g}")
    return sorted(chosen)


def greedy_tree_warm_start(g: Graph, subset: Iterable[int] | None = None) -> list[int]:
    """Heaviest connected component of the greedy forest."""
    forest = greedy_warm_start(g, subset)
    if not forest:
        return []
    components = induced_components(g, forest)
    best = max(components, key=lambda c: (subset_weight(g, c), -min(c)))
    return sorted(best)
