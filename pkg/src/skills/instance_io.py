"""
Canonical instance text format and the benchmark graph generators.

Format (UTF-8, LF):
    line 1      "n m"
    line 2      n whitespace-separated weights
    m lines     "u v" with 0-based endpoints, u < v

Generators draw from numpy's PCG64 (`numpy.random.default_rng(seed)`), so the
seed fully determines the output.
"""

from __future__ import annotations

import itertools
import logging
import re

import networkx as nx
import numpy as np
from pydantic import ValidationError

from src.models.errors import GeneratorError, InstanceParseError
from src.models.graph import Graph
from src.models.instance import CLASS_PREFIX, GraphClass, InstanceSpec

logger = logging.getLogger(__name__)

_NAME_PATTERN = re.compile(r"^(R|GNQ|G|T|H)_(\d+)_(\d+)_(\d+)_(\d+)(?:_s(\d+))?(?:\.txt)?$")


# ── Text format ──

def _parse_number(token: str, line: int) -> float:
    try:
        return float(int(token))
    except ValueError:
        try:
            return float(token)
        except ValueError:
            raise InstanceParseError(line, f"not a number: {token!r}") from None


def parse_instance(text: str) -> Graph:
    """Parse canonical instance text. Errors name the offending 1-based line."""
    lines = text.split("\n")

    header = lines[0].split() if lines else []
    if len(header) != 2 or not all(t.isdigit() for t in header):
        raise InstanceParseError(1, "header must be 'n m' with nonnegative integers")
    n, m = int(header[0]), int(header[1])

    weight_tokens = lines[1].split() if len(lines) > 1 else []
    if len(weight_tokens) != n:
        raise InstanceParseError(2, f"expected {n} weights, found {len(weight_tokens)}")
    weights = [_parse_number(t, 2) for t in weight_tokens]
    for w in weights:
        if w < 0:
            raise InstanceParseError(2, f"negative weight {w}")

    edges: set[tuple[int, int]] = set()
    for k in range(m):
        lineno = k + 3
        if lineno > len(lines):
            raise InstanceParseError(lineno, f"expected {m} edge lines, found {k}")
        tokens = lines[lineno - 1].split()
        if len(tokens) != 2 or not all(t.lstrip("-").isdigit() for t in tokens):
            raise InstanceParseError(lineno, "edge line must be 'u v'")
        u, v = int(tokens[0]), int(tokens[1])
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceParseError(lineno, f"endpoint out of range in edge {u} {v}")
        if u == v:
            raise InstanceParseError(lineno, f"self-loop at vertex {u}")
        edge = (min(u, v), max(u, v))
        if edge in edges:
            raise InstanceParseError(lineno, f"duplicate edge {edge[0]} {edge[1]}")
        edges.add(edge)

    for extra, line in enumerate(lines[m + 2:], start=m + 3):
        if line.strip():
            raise InstanceParseError(extra, "unexpected content after edge list")

    return Graph.from_edges(n, sorted(edges), weights)


def _format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def write_instance(g: Graph) -> str:
    out = [f"{g.n} {g.m}", " ".join(_format_weight(w) for w in g.weights)]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


# ── Generators ──

def _check_weight_bounds(low: int, up: int) -> None:
    if not 10 <= low <= up:
        raise GeneratorError(f"weight bounds must satisfy 10 <= low <= up, got [{low}, {up}]")


def _draw_weights(rng: np.random.Generator, n: int, low: int, up: int) -> list[float]:
    return [float(w) for w in rng.integers(low, up + 1, size=n)]


def _from_nx(graph: nx.Graph, weights: list[float]) -> Graph:
    labelled = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    return Graph.from_edges(labelled.number_of_nodes(), list(labelled.edges()), weights)


def gen_random(n: int, m: int, low: int, up: int, seed: int) -> Graph:
    """n vertices and exactly m distinct edges sampled uniformly without replacement."""
    if n < 0 or m < 0 or m > n * (n - 1) // 2:
        raise GeneratorError(f"cannot place {m} edges on {n} vertices")
    _check_weight_bounds(low, up)
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    picked = rng.choice(len(pairs), size=m, replace=False) if m else []
    edges = [pairs[int(i)] for i in picked]
    return Graph.from_edges(n, edges, _draw_weights(rng, n, low, up))


def gen_grid(rows: int, cols: int, low: int, up: int, seed: int) -> Graph:
    """rows x cols lattice with 4-neighborhood; vertex r*cols + c."""
    if rows < 2 or cols < 2:
        raise GeneratorError(f"grid needs rows, cols >= 2, got {rows}x{cols}")
    _check_weight_bounds(low, up)
    rng = np.random.default_rng(seed)
    return _from_nx(nx.grid_2d_graph(rows, cols), _draw_weights(rng, rows * cols, low, up))


def gen_toroidal(rows: int, cols: int, low: int, up: int, seed: int) -> Graph:
    """Grid wrapped in both dimensions. With a side of 2 the wrap edge coincides and is kept once."""
    if rows < 2 or cols < 2:
        raise GeneratorError(f"toroidal grid needs rows, cols >= 2, got {rows}x{cols}")
    _check_weight_bounds(low, up)
    rng = np.random.default_rng(seed)
    graph = nx.grid_2d_graph(rows, cols, periodic=True)
    return _from_nx(graph, _draw_weights(rng, rows * cols, low, up))


def gen_hypercube(d: int, low: int, up: int, seed: int) -> Graph:
    """2^d vertices adjacent iff their binary labels differ in one bit."""
    if d < 1:
        raise GeneratorError(f"hypercube dimension must be >= 1, got {d}")
    _check_weight_bounds(low, up)
    rng = np.random.default_rng(seed)
    return _from_nx(nx.hypercube_graph(d), _draw_weights(rng, 2 ** d, low, up))


def generate(spec: InstanceSpec) -> Graph:
    """Dispatch on the graph class of `spec`."""
    logger.debug(f"Generating {instance_name(spec)}")
    if spec.graph_class == GraphClass.random:
        return gen_random(spec.n, spec.m, spec.low, spec.up, spec.seed)
    if spec.graph_class in (GraphClass.grid, GraphClass.gridnq):
        return gen_grid(spec.n, spec.m, spec.low, spec.up, spec.seed)
    if spec.graph_class == GraphClass.toroidal:
        return gen_toroidal(spec.n, spec.m, spec.low, spec.up, spec.seed)
    if spec.n != spec.m:
        raise GeneratorError(f"hypercube needs n == m (dimension), got {spec.n} and {spec.m}")
    return gen_hypercube(spec.n, spec.low, spec.up, spec.seed)


# ── Naming ──

def instance_name(spec: InstanceSpec) -> str:
    """X_n_m_low_up_s<seed>.txt"""
    prefix = CLASS_PREFIX[spec.graph_class]
    return f"{prefix}_{spec.n}_{spec.m}_{spec.low}_{spec.up}_s{spec.seed}.txt"


def parse_instance_name(name: str) -> InstanceSpec | None:
    """Recover the InstanceSpec from a file name, or None if it does not follow the scheme."""
    match = _NAME_PATTERN.match(name)
    if not match:
        return None
    by_prefix = {p: c for c, p in CLASS_PREFIX.items()}
    prefix, n, m, low, up, seed = match.groups()
    try:
        return InstanceSpec(
            graph_class=by_prefix[prefix], n=int(n), m=int(m),
            low=int(low), up=int(up), seed=int(seed or 0),
        )
    except ValidationError:
        return None
