"""
MIP model containers: columns, linear rows, variable maps and cutting planes.
"""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Formulation(str, Enum):
    CYC = "CYC"
    FLOW = "FLOW"
    MTZ = "MTZ"
    TCYC = "TCYC"
    DCUT = "DCUT"


class ColumnKind(str, Enum):
    binary = "binary"
    continuous = "continuous"


class Sense(str, Enum):
    le = "<="
    eq = "="
    ge = ">="


class CutTag(str, Enum):
    cycle = "cycle"
    cutset = "cutset"
    clique = "clique"


class Column(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    kind: ColumnKind
    lower: float = 0.0
    upper: float = 1.0
    obj: float = 0.0


class Row(BaseModel):
    model_config = ConfigDict(frozen=True)

    coeffs: dict[int, float]
    sense: Sense
    rhs: float
    name: str = ""


class Inequality(BaseModel):
    """Sparse cutting plane  sum(coeffs[j] * x_j) <= rhs."""

    model_config = ConfigDict(frozen=True)

    coeffs: dict[int, float]
    rhs: float
    tag: CutTag
    sense: Sense = Sense.le

    def lhs(self, values) -> float:
        return float(sum(c * values[j] for j, c in self.coeffs.items()))

    def violation(self, values) -> float:
        """lhs - rhs; positive means violated."""
        return self.lhs(values) - self.rhs

    def key(self) -> tuple:
        return (self.tag.value, tuple(sorted(self.coeffs.items())), self.rhs)

    def as_row(self, name: str = "") -> Row:
        return Row(coeffs=dict(self.coeffs), sense=Sense.le, rhs=self.rhs, name=name)


class VariableMap(BaseModel):
    """Column indices of every variable family; absent families are empty."""

    model_config = ConfigDict(frozen=True)

    y: dict[int, int] = Field(default_factory=dict)
    x: dict[tuple[int, int], int] = Field(default_factory=dict)
    z: dict[tuple[int, int], int] = Field(default_factory=dict)
    f: dict[tuple[int, int], int] = Field(default_factory=dict)
    phi: dict[int, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_disjoint(self) -> "VariableMap":
        columns = [
            *self.y.values(), *self.x.values(), *self.z.values(),
            *self.f.values(), *self.phi.values(),
        ]
        if len(columns) != len(set(columns)):
            raise ValueError("variable families share a column")
        return self


class MipModel(BaseModel):
    """Maximisation MIP: columns, static rows and the lazily generated row families."""

    model_config = ConfigDict(frozen=True)

    formulation: Formulation
    columns: tuple[Column, ...]
    rows: tuple[Row, ...]
    dynamic_classes: frozenset[CutTag] = frozenset()
    tree_restricted: bool = False

    @model_validator(mode="after")
    def _check_rows(self) -> "MipModel":
        n_cols = len(self.columns)
        for col in self.columns:
            if col.kind == ColumnKind.binary and (col.lower, col.upper) != (0.0, 1.0):
                raise ValueError(f"binary column {col.name} must have bounds [0, 1]")
        for row in self.rows:
            for j in row.coeffs:
                if not 0 <= j < n_cols:
                    raise ValueError(f"row {row.name} references missing column {j}")
        return self

    @property
    def binary_columns(self) -> list[int]:
        return [j for j, col in enumerate(self.columns) if col.kind == ColumnKind.binary]
