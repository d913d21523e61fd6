"""
Builders for the five MIP formulations of the induced forest problem, the
single-row induced tree restriction, feasibility completion and an LP-file
style text dump.

Column order is always: y, then x (or z), then f, then phi, each in index order.
"""

from __future__ import annotations

import logging
from collections import deque

import numpy as np

from src.models.errors import ModelError
from src.models.graph import Graph
from src.models.mip import (
    Column,
    ColumnKind,
    CutTag,
    Formulation,
    MipModel,
    Row,
    Sense,
    VariableMap,
)
from src.skills.graph_core import induced_components, orient, transform

logger = logging.getLogger(__name__)


def _vname(v: int, n: int) -> str:
    return "s" if v == n else str(v)


class _ModelBuilder:
    """Accumulates columns and rows for one formulation."""

    def __init__(self, g: Graph):
        self.g = g
        self.columns: list[Column] = []
        self.rows: list[Row] = []

    def column(self, name: str, kind: ColumnKind, obj: float = 0.0, upper: float = 1.0) -> int:
        self.columns.append(Column(name=name, kind=kind, upper=upper, obj=obj))
        return len(self.columns) - 1

    def row(self, coeffs: dict[int, float], sense: Sense, rhs: float, name: str) -> None:
        self.rows.append(Row(coeffs=coeffs, sense=sense, rhs=float(rhs), name=name))

    def y_columns(self, with_root: bool) -> dict[int, int]:
        n = self.g.n
        y = {v: self.column(f"y_{v}", ColumnKind.binary, obj=self.g.weights[v]) for v in range(n)}
        if with_root:
            y[n] = self.column("y_s", ColumnKind.binary)
        return y

    def finish(self, formulation: Formulation, dynamic: frozenset[CutTag]) -> MipModel:
        model = MipModel(
            formulation=formulation,
            columns=tuple(self.columns),
            rows=tuple(self.rows),
            dynamic_classes=dynamic,
        )
        logger.debug(
            f"Built {formulation.value}: {len(self.columns)} columns, {len(self.rows)} rows"
        )
        return model


def _directed_core(b: _ModelBuilder) -> tuple[dict[int, int], dict[tuple[int, int], int]]:
    """y over V_s, x over A, in-degree rows, y_s = 1 and both induced-subgraph families."""
    g = b.g
    n = g.n
    dg = orient(transform(g))
    y = b.y_columns(with_root=True)
    x = {
        (u, v): b.column(f"x_{_vname(u, n)}_{_vname(v, n)}", ColumnKind.binary)
        for u, v in dg.arcs
    }

    for v in range(n):
        coeffs = {x[dg.arcs[a]]: 1.0 for a in dg.in_arcs[v]}
        coeffs[y[v]] = -1.0
        b.row(coeffs, Sense.eq, 0.0, f"indeg_{v}")
    b.row({y[n]: 1.0}, Sense.eq, 1.0, "root")
    for u, v in dg.arcs:
        coeffs = {x[(u, v)]: 1.0, y[v]: -1.0}
        if (v, u) in x:
            coeffs[x[(v, u)]] = 1.0
        b.row(coeffs, Sense.le, 0.0, f"arc_upper_{_vname(u, n)}_{v}")
    for u, v in g.edges:
        b.row({x[(u, v)]: 1.0, x[(v, u)]: 1.0, y[u]: -1.0, y[v]: -1.0}, Sense.ge, -1.0,
              f"induced_{u}_{v}")
    return y, x


# ── Formulations ──

def build_cyc(g: Graph) -> tuple[MipModel, VariableMap]:
    """Cycle elimination: y over V only, every cycle row generated lazily."""
    b = _ModelBuilder(g)
    y = b.y_columns(with_root=False)
    return b.finish(Formulation.CYC, frozenset({CutTag.cycle})), VariableMap(y=y)


def build_flow(g: Graph) -> tuple[MipModel, VariableMap]:
    """Single-commodity flow from s: one unit reaches each selected vertex."""
    b = _ModelBuilder(g)
    n = g.n
    big_m = float(n)  # |V_s| - 1
    y, x = _directed_core(b)
    dg = orient(transform(g))
    f = {
        (u, v): b.column(f"f_{_vname(u, n)}_{_vname(v, n)}", ColumnKind.continuous, upper=big_m)
        for u, v in dg.arcs
    }

    coeffs = {f[dg.arcs[a]]: 1.0 for a in dg.out_arcs[n]}
    for v in range(n):
        coeffs[y[v]] = coeffs.get(y[v], 0.0) - 1.0
    b.row(coeffs, Sense.eq, 0.0, "source_flow")
    for v in range(n):
        coeffs = {}
        for a in dg.in_arcs[v]:
            coeffs[f[dg.arcs[a]]] = 1.0
        for a in dg.out_arcs[v]:
            coeffs[f[dg.arcs[a]]] = -1.0
        coeffs[y[v]] = -1.0
        b.row(coeffs, Sense.eq, 0.0, f"balance_{v}")
    for u, v in dg.arcs:
        b.row({x[(u, v)]: 1.0, f[(u, v)]: -1.0}, Sense.le, 0.0, f"link_lo_{_vname(u, n)}_{v}")
        b.row({f[(u, v)]: 1.0, x[(u, v)]: -big_m}, Sense.le, 0.0, f"link_up_{_vname(u, n)}_{v}")

    return b.finish(Formulation.FLOW, frozenset()), VariableMap(y=y, x=x, f=f)


def build_mtz(g: Graph) -> tuple[MipModel, VariableMap]:
    """Miller-Tucker-Zemlin potentials along selected arcs."""
    b = _ModelBuilder(g)
    n = g.n
    n_s = float(n + 1)  # |V_s|
    y, x = _directed_core(b)
    dg = orient(transform(g))
    phi = {
        v: b.column(f"phi_{_vname(v, n)}", ColumnKind.continuous, upper=n_s - 1)
        for v in range(n + 1)
    }

    for u, v in dg.arcs:
        coeffs = {phi[u]: 1.0, phi[v]: -1.0, x[(u, v)]: n_s}
        if (v, u) in x:
            coeffs[x[(v, u)]] = n_s - 2
        b.row(coeffs, Sense.le, n_s - 1, f"mtz_{_vname(u, n)}_{v}")
    for v in range(n):
        b.row({y[v]: 1.0, phi[v]: -1.0}, Sense.le, 0.0, f"phi_lo_{v}")
        b.row({phi[v]: 1.0}, Sense.le, n_s - 1, f"phi_up_{v}")
    b.row({phi[n]: 1.0}, Sense.eq, 0.0, "phi_root")

    return b.finish(Formulation.MTZ, frozenset()), VariableMap(y=y, x=x, phi=phi)


def build_tcyc(g: Graph) -> tuple[MipModel, VariableMap]:
    """Undirected tree on G_s: edge count equals selected vertices, cycles lazy."""
    b = _ModelBuilder(g)
    n = g.n
    gs = transform(g)
    y = b.y_columns(with_root=True)
    z = {(u, v): b.column(f"z_{u}_{_vname(v, n)}", ColumnKind.binary) for u, v in gs.edges}

    coeffs = {col: 1.0 for col in z.values()}
    for v in range(n):
        coeffs[y[v]] = -1.0
    b.row(coeffs, Sense.eq, 0.0, "edge_count")
    b.row({y[n]: 1.0}, Sense.eq, 1.0, "root")
    for (u, v), col in z.items():
        b.row({col: 1.0, y[u]: -1.0}, Sense.le, 0.0, f"edge_upper_{u}_{_vname(v, n)}_{u}")
        if v != n:
            b.row({col: 1.0, y[v]: -1.0}, Sense.le, 0.0, f"edge_upper_{u}_{v}_{v}")
    for u, v in g.edges:
        b.row({z[(u, v)]: 1.0, y[u]: -1.0, y[v]: -1.0}, Sense.ge, -1.0, f"induced_{u}_{v}")

    return b.finish(Formulation.TCYC, frozenset({CutTag.cycle})), VariableMap(y=y, z=z)


def build_dcut(g: Graph) -> tuple[MipModel, VariableMap]:
    """Arborescence rooted at s; cutset rows generated lazily."""
    b = _ModelBuilder(g)
    y, x = _directed_core(b)
    return b.finish(Formulation.DCUT, frozenset({CutTag.cutset})), VariableMap(y=y, x=x)


BUILDERS = {
    Formulation.CYC: build_cyc,
    Formulation.FLOW: build_flow,
    Formulation.MTZ: build_mtz,
    Formulation.TCYC: build_tcyc,
    Formulation.DCUT: build_dcut,
}


def build_model(g: Graph, formulation: Formulation) -> tuple[MipModel, VariableMap]:
    return BUILDERS[formulation](g)


def add_tree_restriction(model: MipModel, vm: VariableMap) -> MipModel:
    """Allow at most one selected edge/arc at the dummy root, turning forests into trees."""
    if model.formulation == Formulation.CYC:
        raise ModelError("formulation not extendable: CYC has no edge or arc variables")
    root = len(vm.y) - 1
    if model.formulation == Formulation.TCYC:
        cols = [col for (u, v), col in vm.z.items() if v == root]
    else:
        cols = [col for (u, v), col in vm.x.items() if u == root]
    row = Row(coeffs={col: 1.0 for col in cols}, sense=Sense.le, rhs=1.0, name="tree")
    return model.model_copy(update={"rows": model.rows + (row,), "tree_restricted": True})


# ── Feasibility completion ──

def complete_assignment(g: Graph, model: MipModel, vm: VariableMap, subset) -> np.ndarray:
    """
    Full column vector for an induced forest `subset`.

    Each component of G[subset] is rooted at its smallest vertex and hung from s;
    x follows the BFS tree away from s, f carries subtree sizes, phi holds depths.
    """
    chosen = set(subset)
    n = g.n
    values = np.zeros(len(model.columns))
    for v in chosen:
        values[vm.y[v]] = 1.0
    if model.formulation == Formulation.CYC:
        return values
    values[vm.y[n]] = 1.0

    parent: dict[int, int] = {}
    order: list[int] = []
    for comp in sorted(induced_components(g, chosen), key=min):
        root = min(comp)
        parent[root] = n
        queue = deque([root])
        seen = {root}
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in g.adjacency[u]:
                if w in comp and w not in seen:
                    seen.add(w)
                    parent[w] = u
                    queue.append(w)

    if model.formulation == Formulation.TCYC:
        for u, v in g.edges:
            if u in chosen and v in chosen:
                values[vm.z[(u, v)]] = 1.0
        for v, p in parent.items():
            if p == n:
                values[vm.z[(v, n)]] = 1.0
        return values

    for v, p in parent.items():
        values[vm.x[(p, v)]] = 1.0
    if vm.f:
        subtree = {v: 1 for v in chosen}
        for v in reversed(order):
            if parent[v] != n:
                subtree[parent[v]] += subtree[v]
        for v, p in parent.items():
            values[vm.f[(p, v)]] = float(subtree[v])
    if vm.phi:
        depth = {n: 0}
        for v in order:
            depth[v] = depth[parent[v]] + 1
        for v in chosen:
            values[vm.phi[v]] = float(depth[v])
    return values


# ── Text dump ──

def _format_terms(coeffs: dict[int, float], columns) -> str:
    parts = []
    for j, c in sorted(coeffs.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = columns[j].name if mag == 1 else f"{mag:g} {columns[j].name}"
        parts.append(f"{sign} {term}")
    text = " ".join(parts) if parts else "0"
    return text[2:] if text.startswith("+ ") else text


def dump_lp(model: MipModel) -> str:
    """LP-file style text: objective, constraints, bounds, binaries."""
    cols = model.columns
    obj = {j: c.obj for j, c in enumerate(cols) if c.obj != 0}
    out = [f"\\ formulation: {model.formulation.value}"]
    if model.dynamic_classes:
        dyn = ", ".join(sorted(t.value for t in model.dynamic_classes))
        out.append(f"\\ lazy rows: {dyn}")
    out += ["Maximize", f" obj: {_format_terms(obj, cols)}", "Subject To"]
    for i, row in enumerate(model.rows):
        name = row.name or f"r{i}"
        out.append(f" {name}: {_format_terms(row.coeffs, cols)} {row.sense.value} {row.rhs:g}")
    out.append("Bounds")
    for c in cols:
        if c.kind == ColumnKind.continuous:
            out.append(f" {c.lower:g} <= {c.name} <= {c.upper:g}")
    out.append("Binaries")
    binaries = [c.name for c in cols if c.kind == ColumnKind.binary]
    for k in range(0, len(binaries), 10):
        out.append(" " + " ".join(binaries[k:k + 10]))
    out.append("End")
    return "\n".join(out) + "\n"
