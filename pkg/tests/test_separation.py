import itertools

import networkx as nx
import numpy as np
import pytest

from src.models.graph import Graph
from src.models.mip import CutTag
from src.skills.fixtures import fig3, fig4, fig6
from src.skills.graph_core import is_forest, orient, transform
from src.skills.separation import (
    max_flow_dinic,
    separate_cliques,
    separate_cutsets_fractional,
    separate_cutsets_integer,
    separate_cycles_fractional,
    separate_cycles_integer,
)
from src.skills.warm_start import greedy_warm_start
from tests.conftest import random_graph


def _vertex_sets(cuts):
    return [frozenset(c.coeffs) for c in cuts]


# ── Cycles ──

def test_integer_cycles_triangle(triangle):
    cuts = separate_cycles_integer(triangle, [1, 1, 1])
    assert len(cuts) == 1
    assert cuts[0].coeffs == {0: 1.0, 1: 1.0, 2: 1.0}
    assert cuts[0].rhs == 2.0 and cuts[0].tag == CutTag.cycle


def test_integer_cycles_path(path4):
    assert separate_cycles_integer(path4, [1, 1, 1, 1]) == []


def test_integer_cycles_figure4_square():
    cuts = separate_cycles_integer(fig4(), [1.0] * 8)
    assert frozenset({0, 1, 2, 3}) in _vertex_sets(cuts)
    square = next(c for c in cuts if set(c.coeffs) == {0, 1, 2, 3})
    assert square.rhs == 3.0


def test_integer_cycles_are_chordless():
    # 4-cycle 0-1-2-3 with chord 0-2: every emitted cycle is a triangle
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)], [1] * 4)
    cuts = separate_cycles_integer(g, [1, 1, 1, 1])
    assert cuts
    for cut in cuts:
        assert len(cut.coeffs) == 3
        assert nx.is_isomorphic(g.nx_graph.subgraph(cut.coeffs), nx.cycle_graph(3))


def test_cycle_cut_uses_column_map(triangle):
    cuts = separate_cycles_integer(triangle, [1, 1, 1], y_col={0: 10, 1: 11, 2: 12})
    assert set(cuts[0].coeffs) == {10, 11, 12}


def test_integer_cycle_exactness():
    rng = np.random.default_rng(2024)
    for _ in range(300):
        g = random_graph(rng, int(rng.integers(1, 15)))
        y_hat = [float(rng.random() < 0.6) for _ in range(g.n)]
        cuts = separate_cycles_integer(g, y_hat)
        support = [v for v in range(g.n) if y_hat[v] > 0.5]
        assert bool(cuts) == (not is_forest(g, support))
        for cut in cuts:
            cycle = g.nx_graph.subgraph(cut.coeffs)
            assert len(cut.coeffs) >= 3
            assert cut.rhs == len(cut.coeffs) - 1
            assert all(d == 2 for _, d in cycle.degree()) and nx.is_connected(cycle)
        assert len(set(_vertex_sets(cuts))) == len(cuts)


@pytest.mark.slow
def test_integer_cycle_exactness_full_sweep():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        g = random_graph(rng, int(rng.integers(1, 15)))
        y_hat = [float(rng.random() < 0.6) for _ in range(g.n)]
        support = [v for v in range(g.n) if y_hat[v] > 0.5]
        assert bool(separate_cycles_integer(g, y_hat)) == (not is_forest(g, support))


@pytest.mark.parametrize(
    "y_hat, expected",
    [((1.0, 1.0, 1.0), 1), ((0.5, 0.5, 0.5), 0), ((0.9, 0.9, 0.9), 1), ((0.7, 0.7, 0.6), 0)],
)
def test_fractional_cycles_triangle(triangle, y_hat, expected):
    cuts = separate_cycles_fractional(triangle, y_hat)
    assert len(cuts) == expected
    for cut in cuts:
        assert cut.violation(y_hat) > 1e-6


# ── Cutsets ──

def _xs(dg, selected):
    return [1.0 if arc in selected else 0.0 for arc in dg.arcs]


def test_integer_cutsets_reachable():
    g = Graph.from_edges(2, [(0, 1)], [1, 1])
    dg = orient(transform(g))
    assert separate_cutsets_integer(dg, [1, 1], _xs(dg, {(2, 0), (0, 1)})) == []


def test_integer_cutsets_unreachable_target():
    g = Graph.from_edges(2, [(0, 1)], [1, 1])
    dg = orient(transform(g))
    cuts = separate_cutsets_integer(dg, [1, 1], _xs(dg, {(2, 0)}))
    assert len(cuts) == 1
    cut = cuts[0]
    assert cut.tag == CutTag.cutset and cut.rhs == 0.0
    assert cut.coeffs[1] == 1.0
    # S = {s, 0}: arcs leaving S are (0,1) and (s,1); x columns follow y over V_s
    leaving = {3 + dg.arc_index[(0, 1)], 3 + dg.arc_index[(2, 1)]}
    assert {j: c for j, c in cut.coeffs.items() if j != 1} == {j: -1.0 for j in leaving}


def test_integer_cutsets_figure6_disconnected_tree():
    g = fig6()
    dg = orient(transform(g))
    # a-e-f-i hung from s; c-d-h-l-k selected as a path with no arc from s
    selected = {(12, 0), (0, 4), (4, 5), (4, 8), (2, 3), (3, 7), (7, 11), (11, 10)}
    chosen = {0, 4, 5, 8, 2, 3, 7, 11, 10}
    y_hat = [1.0 if v in chosen else 0.0 for v in range(g.n)]
    cuts = separate_cutsets_integer(dg, y_hat, _xs(dg, selected))
    targets = sorted(next(j for j, c in cut.coeffs.items() if c > 0) for cut in cuts)
    assert targets == [2, 3, 7, 10, 11]


def test_integer_cutset_exactness():
    rng = np.random.default_rng(77)
    for _ in range(300):
        g = random_graph(rng, int(rng.integers(1, 12)))
        dg = orient(transform(g))
        s = dg.s
        y_hat = [float(rng.random() < 0.6) for _ in range(g.n)]
        x_hat = [float(rng.random() < 0.4) for _ in dg.arcs]
        support = {v for v in range(g.n) if y_hat[v] > 0.5}
        h = nx.DiGraph()
        h.add_node(s)
        h.add_edges_from(
            (u, v) for (u, v), x in zip(dg.arcs, x_hat)
            if x > 0.5 and (u == s or u in support) and v in support
        )
        reach = nx.descendants(h, s) | {s}
        cuts = separate_cutsets_integer(dg, y_hat, x_hat)
        assert bool(cuts) == bool(support - reach)


def test_fractional_cutset_without_inflow():
    g = Graph.from_edges(2, [(0, 1)], [1, 1])
    dg = orient(transform(g))
    cuts = separate_cutsets_fractional(dg, [0.0, 1.0], [0.0] * len(dg.arcs))
    assert len(cuts) == 1
    assert cuts[0].coeffs[1] == 1.0


def test_fractional_cutset_satisfied_point():
    g = Graph.from_edges(2, [(0, 1)], [1, 1])
    dg = orient(transform(g))
    x = _xs(dg, set())
    x[dg.arc_index[(2, 0)]] = 0.5
    x[dg.arc_index[(0, 1)]] = 0.5
    x[dg.arc_index[(2, 1)]] = 0.5
    assert separate_cutsets_fractional(dg, [0.5, 1.0], x) == []
    x[dg.arc_index[(2, 1)]] = 0.2
    cuts = separate_cutsets_fractional(dg, [0.5, 1.0], x)
    assert len(cuts) == 1


def _all_cutset_violations(dg, y_hat, x_hat):
    """Exhaustive check over every (S, v) with s in S, v outside."""
    n = dg.s
    worst = 0.0
    for v in range(n):
        others = [u for u in range(n) if u != v]
        for r in range(len(others) + 1):
            for extra in itertools.combinations(others, r):
                side = set(extra) | {dg.s}
                crossing = sum(
                    x_hat[idx] for idx, (a, b) in enumerate(dg.arcs) if a in side and b not in side
                )
                worst = max(worst, y_hat[v] - crossing)
    return worst


def test_fractional_cutset_exactness_small():
    rng = np.random.default_rng(8)
    for _ in range(40):
        g = random_graph(rng, int(rng.integers(1, 6)))
        dg = orient(transform(g))
        y_hat = list(rng.random(g.n))
        x_hat = list(rng.random(len(dg.arcs)) * 0.6)
        cuts = separate_cutsets_fractional(dg, y_hat, x_hat)
        worst = _all_cutset_violations(dg, y_hat, x_hat)
        assert bool(cuts) == (worst > 1e-6)
        values = y_hat + [1.0] + x_hat
        for cut in cuts:
            assert cut.violation(values) > 1e-6


# ── Max flow ──

def test_max_flow_single_arc():
    assert max_flow_dinic(2, {(0, 1): 3.0}, 0, 1) == (3.0, {0})


def test_max_flow_two_paths():
    caps = {(0, 1): 1.0, (1, 3): 1.0, (0, 2): 1.0, (2, 3): 1.0}
    value, side = max_flow_dinic(4, caps, 0, 3)
    assert value == pytest.approx(2.0)
    assert 0 in side and 3 not in side


def test_max_flow_fractional_capacities():
    caps = {(0, 1): 0.1, (0, 2): 0.2, (1, 3): 0.3, (2, 3): 0.15, (1, 2): 0.05}
    value, side = max_flow_dinic(4, caps, 0, 3)
    assert value == pytest.approx(0.25, abs=1e-9)
    assert side == {0, 2}


def test_max_flow_thirds_and_tiny_capacities():
    caps = {(0, 1): 1 / 3, (1, 2): 1 / 3, (0, 2): 2 / 3, (2, 3): 1.0, (0, 3): 1e-12}
    value, side = max_flow_dinic(4, caps, 0, 3)
    assert value == pytest.approx(1.0, abs=1e-8)
    assert 3 not in side


@pytest.mark.parametrize("integral", [True, False])
def test_max_flow_matches_cut_enumeration(integral):
    rng = np.random.default_rng(123 if integral else 124)
    for _ in range(500):
        n = int(rng.integers(2, 9))
        caps = {
            (u, v): float(rng.integers(1, 10)) if integral else float(rng.random())
            for u in range(n) for v in range(n)
            if u != v and rng.random() < 0.35
        }
        value, side = max_flow_dinic(n, caps, 0, n - 1)
        middle = list(range(1, n - 1))
        best = min(
            sum(c for (u, v), c in caps.items() if u in s_set and v not in s_set)
            for r in range(len(middle) + 1)
            for extra in itertools.combinations(middle, r)
            for s_set in [set(extra) | {0}]
        )
        assert value == pytest.approx(best, abs=1e-6)
        assert 0 in side and n - 1 not in side
        crossing = sum(c for (u, v), c in caps.items() if u in side and v not in side)
        assert crossing == pytest.approx(value, abs=1e-6)


# ── Cliques ──

def test_clique_k4():
    g = Graph.from_edges(4, list(itertools.combinations(range(4), 2)), [1] * 4)
    cuts = separate_cliques(g, [1, 1, 1, 1])
    assert len(cuts) == 1
    assert len(cuts[0].coeffs) == 4 and cuts[0].rhs == 2.0 and cuts[0].tag == CutTag.clique


def test_clique_lifted_into_k5(k5):
    cuts = separate_cliques(k5, [1, 1, 1, 0, 0])
    assert len(cuts) == 1
    assert set(cuts[0].coeffs) == {0, 1, 2, 3, 4}


def test_clique_figure3_triangle():
    cuts = separate_cliques(fig3(), [1, 1, 1, 0, 0, 0])
    assert _vertex_sets(cuts) == [frozenset({0, 1, 2})]


def test_clique_not_violated(triangle):
    assert separate_cliques(triangle, [0.6, 0.6, 0.6]) == []


def test_cuts_never_cut_off_forests():
    rng = np.random.default_rng(31)
    for _ in range(60):
        g = random_graph(rng, int(rng.integers(3, 12)))
        y_hat = list(rng.random(g.n))
        cuts = separate_cycles_fractional(g, y_hat) + separate_cliques(g, y_hat)
        cuts += separate_cycles_integer(g, [1.0] * g.n)
        for _ in range(5):
            start = [v for v in range(g.n) if rng.random() < 0.6]
            forest = set(greedy_warm_start(g, start))
            point = [1.0 if v in forest else 0.0 for v in range(g.n)]
            for cut in cuts:
                assert cut.violation(point) <= 1e-9
