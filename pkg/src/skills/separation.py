"""
Cut separation: cycle inequalities (exact for integral points, DFS heuristic
for fractional ones), directed cutset inequalities (BFS for integral points,
max-flow/min-cut for fractional ones) and lifted clique inequalities.

Inputs are the current LP values indexed by vertex (y_hat) or arc (x_hat);
outputs are Inequality objects over model columns, so the caller passes the
column maps of its formulation.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Mapping, Sequence

import networkx as nx
from networkx.algorithms.flow import dinitz

from src import config
from src.models.graph import Digraph, Graph
from src.models.mip import CutTag, Inequality

logger = logging.getLogger(__name__)


def support(y_hat: Sequence[float], eps: float | None = None) -> list[int]:
    """V_sep: vertices whose y value exceeds the support threshold."""
    eps = config.EPS_SUPPORT if eps is None else eps
    return [v for v, val in enumerate(y_hat) if val > eps]


def _identity(n: int) -> dict[int, int]:
    return {v: v for v in range(n)}


def _arc_columns(dg: Digraph) -> dict[int, int]:
    """Directed model layout: y over V_s, then one x column per arc."""
    return {idx: dg.n_vertices + idx for idx in range(len(dg.arcs))}


# ── Cycles ──

def _chordless(g: Graph, cycle: list[int]) -> list[int]:
    """Shortcut chords until the cycle is induced."""
    while len(cycle) > 3:
        pos = {v: i for i, v in enumerate(cycle)}
        k = len(cycle)
        chord = None
        for i, u in enumerate(cycle):
            for w in g.adjacency[u]:
                j = pos.get(w)
                if j is not None and j > i + 1 and not (i == 0 and j == k - 1):
                    chord = (i, j)
                    break
            if chord:
                break
        if chord is None:
            return cycle
        i, j = chord
        inner = cycle[i:j + 1]
        outer = cycle[j:] + cycle[:i + 1]
        cycle = inner if len(inner) <= len(outer) else outer
    return cycle


def _dfs_cycles(g: Graph, vertices: list[int], order_key=None) -> list[list[int]]:
    """
    Iterative DFS over G[vertices]; every back edge (u, w) yields the tree path
    w..u closed by the edge. Roots and neighbor scans follow `order_key`.
    """
    allowed = set(vertices)
    if order_key is None:
        roots = sorted(vertices)
        nbrs = {v: [w for w in g.adjacency[v] if w in allowed] for v in vertices}
    else:
        roots = sorted(vertices, key=order_key)
        nbrs = {v: sorted((w for w in g.adjacency[v] if w in allowed), key=order_key)
                for v in vertices}

    cycles: list[list[int]] = []
    visited: set[int] = set()
    for root in roots:
        if root in visited:
            continue
        visited.add(root)
        path = [root]
        on_path = {root: 0}
        parent = {root: -1}
        stack = [iter(nbrs[root])]
        while stack:
            u = path[-1]
            advanced = False
            for w in stack[-1]:
                if w == parent[u]:
                    continue
                if w in on_path:
                    cycles.append(path[on_path[w]:])
                    continue
                if w in visited:
                    continue
                visited.add(w)
                parent[w] = u
                on_path[w] = len(path)
                path.append(w)
                stack.append(iter(nbrs[w]))
                advanced = True
                break
            if not advanced:
                stack.pop()
                del on_path[path.pop()]
    return cycles


def _cycle_cut(cycle: list[int], y_col: Mapping[int, int]) -> Inequality:
    return Inequality(
        coeffs={y_col[v]: 1.0 for v in cycle},
        rhs=float(len(cycle) - 1),
        tag=CutTag.cycle,
    )


def separate_cycles_integer(
    g: Graph, y_hat: Sequence[float], y_col: Mapping[int, int] | None = None
) -> list[Inequality]:
    """Every distinct cycle met by a DFS of the support. Empty iff the support is a forest."""
    y_col = y_col or _identity(g.n)
    seen: set[frozenset[int]] = set()
    cuts = []
    for cycle in _dfs_cycles(g, support(y_hat)):
        cycle = _chordless(g, cycle)
        key = frozenset(cycle)
        if key not in seen:
            seen.add(key)
            cuts.append(_cycle_cut(cycle, y_col))
    return cuts


def separate_cycles_fractional(
    g: Graph,
    y_hat: Sequence[float],
    y_col: Mapping[int, int] | None = None,
    eps_cut: float | None = None,
) -> list[Inequality]:
    """DFS in nonincreasing y order; keeps only cycles violated by more than eps_cut."""
    y_col = y_col or _identity(g.n)
    eps_cut = config.EPS_CUT if eps_cut is None else eps_cut
    seen: set[frozenset[int]] = set()
    cuts = []
    for cycle in _dfs_cycles(g, support(y_hat), order_key=lambda v: (-y_hat[v], v)):
        cycle = _chordless(g, cycle)
        key = frozenset(cycle)
        if key in seen:
            continue
        seen.add(key)
        if sum(y_hat[v] for v in cycle) > len(cycle) - 1 + eps_cut:
            cuts.append(_cycle_cut(cycle, y_col))
    return cuts


# ── Connectivity ──

def _cutset_cut(
    dg: Digraph, source_side: set[int], target: int,
    y_col: Mapping[int, int], x_col: Mapping[int, int],
) -> Inequality:
    """y_v - sum of x over arcs leaving source_side <= 0."""
    coeffs = {y_col[target]: 1.0}
    for idx, (u, v) in enumerate(dg.arcs):
        if u in source_side and v not in source_side:
            coeffs[x_col[idx]] = coeffs.get(x_col[idx], 0.0) - 1.0
    return Inequality(coeffs=coeffs, rhs=0.0, tag=CutTag.cutset)


def separate_cutsets_integer(
    dg: Digraph,
    y_hat: Sequence[float],
    x_hat: Sequence[float],
    y_col: Mapping[int, int] | None = None,
    x_col: Mapping[int, int] | None = None,
) -> list[Inequality]:
    """
    BFS from s along selected arcs inside the support; one cut per supported
    vertex left unreached, all sharing the reached set as source side.
    """
    n = dg.s
    y_col = y_col or _identity(dg.n_vertices)
    x_col = x_col or _arc_columns(dg)
    sep = support(y_hat[:n])
    inside = set(sep) | {dg.s}

    reached = {dg.s}
    queue = deque([dg.s])
    while queue:
        u = queue.popleft()
        for idx in dg.out_arcs[u]:
            v = dg.arcs[idx][1]
            if v in inside and v not in reached and x_hat[idx] > 0.5:
                reached.add(v)
                queue.append(v)

    return [_cutset_cut(dg, reached, v, y_col, x_col) for v in sep if v not in reached]


def max_flow_dinic(
    n_nodes: int,
    capacities: Mapping[tuple[int, int], float],
    source: int,
    sink: int,
) -> tuple[float, set[int]]:
    """
    Maximum flow value and the source side of a minimum cut (Dinic's algorithm).

    Capacities are rounded to multiples of 1 / MAX_FLOW_SCALE and the flow runs
    on integers; the returned value is scaled back.
    """
    scale = config.MAX_FLOW_SCALE
    network = nx.DiGraph()
    network.add_nodes_from(range(n_nodes))
    for (u, v), cap in capacities.items():
        units = int(round(float(cap) * scale))
        if units <= 0:
            continue
        if network.has_edge(u, v):
            network[u][v]["capacity"] += units
        else:
            network.add_edge(u, v, capacity=units)
    value, (source_side, _) = nx.minimum_cut(network, source, sink, flow_func=dinitz)
    return value / scale, set(source_side)


def separate_cutsets_fractional(
    dg: Digraph,
    y_hat: Sequence[float],
    x_hat: Sequence[float],
    y_col: Mapping[int, int] | None = None,
    x_col: Mapping[int, int] | None = None,
    eps_cut: float | None = None,
) -> list[Inequality]:
    """Exact: a max-flow from s to every supported vertex with capacities x_hat."""
    n = dg.s
    y_col = y_col or _identity(dg.n_vertices)
    x_col = x_col or _arc_columns(dg)
    eps_cut = config.EPS_CUT if eps_cut is None else eps_cut
    capacities = {
        arc: float(x_hat[idx]) for idx, arc in enumerate(dg.arcs) if x_hat[idx] > config.EPS_SUPPORT
    }

    cuts = []
    for v in support(y_hat[:n]):
        value, source_side = max_flow_dinic(dg.n_vertices, capacities, dg.s, v)
        if value < y_hat[v] - eps_cut:
            cuts.append(_cutset_cut(dg, source_side, v, y_col, x_col))
    return cuts


# ── Cliques ──

def _clique_cut(clique: list[int], y_col: Mapping[int, int]) -> Inequality:
    return Inequality(coeffs={y_col[v]: 1.0 for v in sorted(clique)}, rhs=2.0, tag=CutTag.clique)


def separate_cliques(
    g: Graph,
    y_hat: Sequence[float],
    y_col: Mapping[int, int] | None = None,
    eps_cut: float | None = None,
) -> list[Inequality]:
    """
    Greedy maximal cliques of the support, ordered by y then support degree.
    Violated cliques are lifted with outside vertices by original degree.
    """
    y_col = y_col or _identity(g.n)
    eps_cut = config.EPS_CUT if eps_cut is None else eps_cut
    sep = support(y_hat)
    in_sep = set(sep)
    sep_degree = {v: sum(1 for w in g.adjacency[v] if w in in_sep) for v in sep}
    order = sorted(sep, key=lambda v: (-y_hat[v], -sep_degree[v], v))
    outside = sorted((v for v in range(g.n) if v not in in_sep), key=lambda v: (-g.degree(v), v))

    covered: set[int] = set()
    seen: set[frozenset[int]] = set()
    cuts = []
    for start in order:
        if start in covered:
            continue
        clique = [start]
        for v in order:
            if v != start and all(g.has_edge(v, u) for u in clique):
                clique.append(v)
        covered.update(clique)
        if len(clique) < 3 or sum(y_hat[v] for v in clique) <= 2.0 + eps_cut:
            continue
        for v in outside:
            if all(g.has_edge(v, u) for u in clique):
                clique.append(v)
        key = frozenset(clique)
        if key not in seen:
            seen.add(key)
            cuts.append(_clique_cut(clique, y_col))
    return cuts
