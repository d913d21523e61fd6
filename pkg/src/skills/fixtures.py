"""
Small hand-made graphs on which the best induced forest is not a tree.
Vertex letters map to indices in alphabetical order (a=0, b=1, ...).
"""

from __future__ import annotations

from src.models.graph import Graph


def _letters(weights: str, edges: str) -> Graph:
    w = [float(t) for t in weights.split()]
    pairs = [(ord(e[0]) - ord("a"), ord(e[1]) - ord("a")) for e in edges.split()]
    return Graph.from_edges(len(w), pairs, w)


def fig3() -> Graph:
    """Triangle abc with a heavy pendant on each corner."""
    return _letters("1 1 1 10 10 10", "ab bc ca ad be cf")


def fig4() -> Graph:
    """4-cycle abcd with a heavy pendant on each corner."""
    return _letters("1 1 1 1 10 10 10 10", "ab bc cd da ae bf cg dh")


def fig5() -> Graph:
    return _letters("1 10 1 10 10 10", "ab bc cd da ae de bf cf")


def fig6() -> Graph:
    """3x4 grid whose light vertices b, g, j split the heavy ones."""
    return _letters(
        "10 1 10 10 10 10 1 10 10 1 10 10",
        "ab bc cd ef fg gh ij jk kl ae bf cg dh ei fj gk hl",
    )


# name -> (builder, optimal MWIF value)
FIXTURES = {
    "fig3": (fig3, 32.0),
    "fig4": (fig4, 43.0),
    "fig5": (fig5, 40.0),
    "fig6": (fig6, 90.0),
}
