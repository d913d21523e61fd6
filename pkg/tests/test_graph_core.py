import pytest

from src.models.errors import GraphError
from src.models.graph import Graph
from src.skills.graph_core import (
    induced_components,
    is_forest,
    is_tree,
    orient,
    subset_weight,
    transform,
)


def test_from_edges_normalises_adjacency():
    g = Graph.from_edges(4, [(2, 0), (0, 1), (3, 2)], [1, 2, 3, 4])
    assert g.adjacency == ((1, 2), (0,), (0, 3), (2,))
    assert g.edges == ((0, 1), (0, 2), (2, 3))
    assert g.m == 3
    assert g.degree(0) == 2
    assert g.has_edge(3, 2) and not g.has_edge(1, 3)


@pytest.mark.parametrize(
    "edges, weights",
    [
        ([(0, 0)], [1, 1]),          # self-loop
        ([(0, 1), (1, 0)], [1, 1]),  # duplicate
        ([(0, 5)], [1, 1]),          # out of range
        ([(0, 1)], [1, -1]),         # negative weight
        ([(0, 1)], [1]),             # weight count
    ],
)
def test_from_edges_rejects_ill_formed(edges, weights):
    with pytest.raises(GraphError):
        Graph.from_edges(2, edges, weights)


def test_asymmetric_adjacency_rejected():
    with pytest.raises(ValueError):
        Graph(n=2, adjacency=((1,), ()), weights=(1.0, 1.0))


def test_transform_adds_root_adjacent_to_all(triangle):
    gs = transform(triangle)
    assert gs.s == 3
    assert gs.n_vertices == 4
    assert gs.graph.adjacency[3] == (0, 1, 2)
    assert gs.graph.weights[3] == 0.0
    assert gs.edges[-3:] == ((0, 3), (1, 3), (2, 3))
    # base untouched
    assert triangle.n == 3


def test_orient_arcs_sorted_and_rooted(triangle):
    dg = orient(transform(triangle))
    assert len(dg.arcs) == 2 * triangle.m + triangle.n
    assert list(dg.arcs) == sorted(dg.arcs)
    assert dg.arcs[-3:] == ((3, 0), (3, 1), (3, 2))
    assert dg.in_arcs[3] == ()
    assert all((v, 3) not in dg.arc_index for v in range(3))
    for v in range(3):
        assert len(dg.in_arcs[v]) == triangle.degree(v) + 1


def test_orient_empty_graph():
    dg = orient(transform(Graph.from_edges(0, [], [])))
    assert dg.arcs == ()
    assert dg.n_vertices == 1


def test_is_forest(triangle, path4):
    assert not is_forest(triangle, [0, 1, 2])
    assert is_forest(triangle, [0, 1])
    assert is_forest(triangle, [])
    assert is_forest(path4, range(4))


def test_is_tree(triangle, path4):
    assert is_tree(path4, range(4))
    assert not is_tree(path4, [0, 2])
    assert not is_tree(triangle, [0, 1, 2])
    assert is_tree(triangle, [2])
    with pytest.raises(GraphError):
        is_tree(triangle, [])


def test_subset_checks_vertex_range(triangle):
    with pytest.raises(GraphError):
        is_forest(triangle, [0, 7])


def test_subset_weight_and_components(path4):
    assert subset_weight(path4, [0, 2]) == 7.0
    assert subset_weight(path4, []) == 0.0
    comps = induced_components(path4, [0, 1, 3])
    assert sorted(map(sorted, comps)) == [[0, 1], [3]]
