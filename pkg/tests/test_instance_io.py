import pytest

from src.models.errors import GeneratorError, InstanceParseError
from src.models.instance import GraphClass, InstanceSpec
from src.skills.fixtures import fig3
from src.skills.instance_io import (
    gen_grid,
    gen_hypercube,
    gen_random,
    gen_toroidal,
    generate,
    instance_name,
    parse_instance,
    parse_instance_name,
    write_instance,
)


def test_parse_canonical_text():
    g = parse_instance("3 2\n5 6 7\n0 1\n2 1\n")
    assert g.n == 3
    assert g.weights == (5.0, 6.0, 7.0)
    assert g.edges == ((0, 1), (1, 2))


def test_parse_edgeless_and_empty():
    assert parse_instance("2 0\n4 4\n").m == 0
    assert parse_instance("0 0\n\n").n == 0


@pytest.mark.parametrize(
    "text, line",
    [
        ("3\n1 1 1\n", 1),
        ("3 1\n1 1\n0 1\n", 2),
        ("2 0\n1 -1\n", 2),
        ("2 1\n1 x\n0 1\n", 2),
        ("3 1\n1 1 1\n1 1\n", 3),
        ("3 2\n1 1 1\n0 1\n1 0\n", 4),
        ("3 1\n1 1 1\n0 3\n", 3),
        ("3 1\n1 1 1\n0\n", 3),
        ("3 2\n1 1 1\n0 1\n", 4),
        ("3 1\n1 1 1\n0 1\n1 2\n", 4),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(InstanceParseError) as exc:
        parse_instance(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_write_then_parse_preserves_graph():
    g = fig3()
    text = write_instance(g)
    assert text.splitlines()[1] == "1 1 1 10 10 10"
    back = parse_instance(text)
    assert (back.n, back.adjacency, back.weights) == (g.n, g.adjacency, g.weights)


def test_gen_random_counts_and_weights():
    g = gen_random(20, 40, 10, 25, seed=3)
    assert (g.n, g.m) == (20, 40)
    assert all(10 <= w <= 25 and float(w).is_integer() for w in g.weights)


def _key(g):
    return g.n, g.adjacency, g.weights


def test_gen_random_is_seed_deterministic():
    assert _key(gen_random(12, 20, 10, 75, seed=7)) == _key(gen_random(12, 20, 10, 75, seed=7))
    assert _key(gen_random(12, 20, 10, 75, seed=7)) != _key(gen_random(12, 20, 10, 75, seed=8))


def test_lattice_generators():
    grid = gen_grid(5, 5, 10, 25, seed=0)
    assert (grid.n, grid.m) == (25, 40)
    assert grid.has_edge(0, 1) and grid.has_edge(0, 5) and not grid.has_edge(4, 5)
    torus = gen_toroidal(4, 4, 10, 25, seed=0)
    assert (torus.n, torus.m) == (16, 32)
    assert all(torus.degree(v) == 4 for v in range(16))
    cube = gen_hypercube(3, 10, 25, seed=0)
    assert (cube.n, cube.m) == (8, 12)
    assert cube.has_edge(0, 1) and not cube.has_edge(0, 3)


@pytest.mark.parametrize(
    "call",
    [
        lambda: gen_random(4, 7, 10, 25, 0),
        lambda: gen_random(4, 3, 5, 25, 0),
        lambda: gen_random(4, 3, 30, 25, 0),
        lambda: gen_grid(1, 5, 10, 25, 0),
        lambda: gen_hypercube(0, 10, 25, 0),
        lambda: generate(InstanceSpec(graph_class=GraphClass.hypercube, n=3, m=4)),
    ],
)
def test_generator_errors(call):
    with pytest.raises(GeneratorError):
        call()


def test_generate_dispatch_and_naming():
    spec = InstanceSpec(graph_class=GraphClass.random, n=25, m=33, low=10, up=25, seed=1)
    assert instance_name(spec) == "R_25_33_10_25_s1.txt"
    assert generate(spec).m == 33
    assert parse_instance_name("R_25_33_10_25_s1.txt") == spec
    gnq = InstanceSpec(graph_class=GraphClass.gridnq, n=3, m=4)
    assert instance_name(gnq).startswith("GNQ_3_4_")
    assert parse_instance_name(instance_name(gnq)).graph_class == GraphClass.gridnq
    assert parse_instance_name("fig3.txt") is None
