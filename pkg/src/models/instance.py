"""
Instance descriptors for the benchmark graph classes.
"""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field


class GraphClass(str, Enum):
    random = "random"
    grid = "grid"
    gridnq = "gridnq"
    toroidal = "toroidal"
    hypercube = "hypercube"


# File-name prefixes of the benchmark naming scheme X_n_m_low_up
CLASS_PREFIX = {
    GraphClass.random: "R",
    GraphClass.grid: "G",
    GraphClass.gridnq: "GNQ",
    GraphClass.toroidal: "T",
    GraphClass.hypercube: "H",
}


class InstanceSpec(BaseModel):
    """Generator parameters; n and m are class-specific (vertices/edges, rows/cols, dimension)."""

    graph_class: GraphClass
    n: int = Field(ge=0)
    m: int = Field(ge=0)
    low: int = 10
    up: int = 25
    seed: int = Field(default=0, ge=0, lt=2**64)
