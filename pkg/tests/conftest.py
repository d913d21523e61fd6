"""Shared graphs and helpers for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from src.models.graph import Graph
from src.models.mip import MipModel, Sense
from src.skills.fixtures import FIXTURES


def random_graph(rng: np.random.Generator, n: int, low: int = 10, up: int = 75) -> Graph:
    """n vertices, m uniform in [0, n(n-1)/2], integral weights in [low, up]."""
    pairs = list(itertools.combinations(range(n), 2))
    m = int(rng.integers(0, len(pairs) + 1))
    picked = rng.choice(len(pairs), size=m, replace=False) if m else []
    weights = rng.integers(low, up + 1, size=n)
    return Graph.from_edges(n, [pairs[int(i)] for i in picked], [float(w) for w in weights])


def rows_satisfied(model: MipModel, values, tol: float = 1e-9) -> list[str]:
    """Names of static rows violated by `values`."""
    bad = []
    for i, row in enumerate(model.rows):
        lhs = sum(c * values[j] for j, c in row.coeffs.items())
        if row.sense == Sense.le and lhs > row.rhs + tol:
            bad.append(row.name or f"r{i}")
        elif row.sense == Sense.ge and lhs < row.rhs - tol:
            bad.append(row.name or f"r{i}")
        elif row.sense == Sense.eq and abs(lhs - row.rhs) > tol:
            bad.append(row.name or f"r{i}")
    return bad


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)], [1.0, 1.0, 1.0])


@pytest.fixture
def path4() -> Graph:
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], [3.0, 1.0, 4.0, 1.0])


@pytest.fixture
def k5() -> Graph:
    return Graph.from_edges(5, list(itertools.combinations(range(5), 2)), [1.0] * 5)


@pytest.fixture(params=sorted(FIXTURES))
def figure(request) -> tuple[str, Graph, float]:
    """(name, graph, optimal MWIF value) for each hand-made fixture."""
    build, mwif = FIXTURES[request.param]
    return request.param, build(), mwif
