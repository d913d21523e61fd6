"""
Branch-and-cut driver: root cut loop -> tree search with lazy constraints -> report.

One engine per solve. The cut pool is global: every emitted inequality is
appended to the shared LP, so node bases stay valid (rows are only appended).
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from src import config
from src.models.errors import GraphError, SolverInvariantError, WarmStartError
from src.models.graph import Digraph, Graph
from src.models.mip import CutTag, Formulation, Inequality, MipModel, VariableMap
from src.models.solve import RunLogEntry, SolveConfig, SolveReport, SolveStatus
from src.skills.graph_core import is_forest, is_tree, orient, subset_weight, transform
from src.skills.lp_core import Basis, LpProblem, LpStatus, solve_lp
from src.skills.metrics import compute_glr, compute_open_gap
from src.skills.model_builder import add_tree_restriction, build_model
from src.skills.separation import (
    separate_cliques,
    separate_cutsets_fractional,
    separate_cutsets_integer,
    separate_cycles_fractional,
    separate_cycles_integer,
)
from src.skills.warm_start import greedy_tree_warm_start, greedy_warm_start

logger = logging.getLogger(__name__)

_ARBORESCENCE = frozenset({Formulation.FLOW, Formulation.MTZ, Formulation.DCUT})


@dataclass
class _Node:
    lower: np.ndarray
    upper: np.ndarray
    bound: float
    basis: Basis | None = None
    depth: int = 0


class _LpFailure(Exception):
    """Node LP hit the iteration limit."""


class _TimeUp(Exception):
    pass


class BranchAndCutEngine:
    def __init__(self, g: Graph, cfg: SolveConfig):
        self.g = g
        self.cfg = cfg
        model, vmap = build_model(g, cfg.formulation)
        if cfg.mwit:
            model = add_tree_restriction(model, vmap)
        self.model: MipModel = model
        self.vmap: VariableMap = vmap
        self.problem = LpProblem.from_model(model)

        n = g.n
        self.y_col = {v: vmap.y[v] for v in range(n)}
        self.y_idx = np.array([vmap.y[v] for v in range(n)], dtype=int)
        self.dg: Digraph | None = None
        self.x_col: dict[int, int] = {}
        self.x_idx = np.array([], dtype=int)
        if model.formulation in _ARBORESCENCE:
            self.dg = orient(transform(g))
            self.x_col = {idx: vmap.x[arc] for idx, arc in enumerate(self.dg.arcs)}
            self.x_idx = np.array([vmap.x[arc] for arc in self.dg.arcs], dtype=int)
        self.branch_y = [vmap.y[v] for v in range(n)]
        edge_cols = vmap.x if vmap.x else vmap.z
        self.branch_other = sorted(edge_cols.values())
        self.integral_objective = all(float(w).is_integer() for w in g.weights)

        self.cuts: list[Inequality] = []
        self._pool_keys: set[tuple] = set()
        self.cuts_added = {tag.value: 0 for tag in CutTag}
        self.root_objectives: list[float] = []
        self.run_log: list[RunLogEntry] = []

        self.lb = 0.0
        self.best_subset: list[int] = []
        self._pruned_max = -math.inf
        self._started = 0.0
        self._selections = 0
        self.nodes_processed = 0

    # ── Incumbent ──

    def _feasible(self, subset: list[int]) -> bool:
        if not subset:
            return True
        if self.cfg.mwit:
            return is_tree(self.g, subset)
        return is_forest(self.g, subset)

    def install_warm_start(self, subset: list[int]) -> None:
        try:
            ok = self._feasible(subset)
        except GraphError as e:
            raise WarmStartError(f"invalid warm start: {e}") from None
        if not ok:
            kind = "tree" if self.cfg.mwit else "forest"
            raise WarmStartError(f"warm start does not induce a {kind}")
        self._offer(subset)

    def _offer(self, subset: list[int]) -> bool:
        value = subset_weight(self.g, subset)
        if value > self.lb or (value == self.lb and subset and not self.best_subset):
            self.lb = value
            self.best_subset = sorted(subset)
            return True
        return False

    def _heuristic(self, values: np.ndarray) -> None:
        """Round y at 0.5 and repair into a forest (or tree)."""
        rounded = [v for v in range(self.g.n) if values[self.y_idx[v]] >= 0.5]
        repair = greedy_tree_warm_start if self.cfg.mwit else greedy_warm_start
        self._offer(repair(self.g, rounded))

    # ── Cut pool ──

    def _add_cuts(self, cuts: list[Inequality]) -> int:
        fresh = []
        for cut in cuts:
            key = cut.key()
            if key in self._pool_keys:
                continue
            self._pool_keys.add(key)
            fresh.append(cut)
        if not fresh:
            return 0
        start = len(self.cuts)
        rows = [cut.as_row(f"{cut.tag.value}_{start + k}") for k, cut in enumerate(fresh)]
        self.problem = self.problem.with_rows(rows)
        self.cuts.extend(fresh)
        for cut in fresh:
            self.cuts_added[cut.tag.value] += 1
        return len(fresh)

    def _x_hat(self, values: np.ndarray) -> np.ndarray:
        return values[self.x_idx]

    def _separate_fractional(self, values: np.ndarray) -> list[Inequality]:
        y_hat = values[self.y_idx]
        cuts: list[Inequality] = []
        if CutTag.cycle in self.model.dynamic_classes:
            cuts += separate_cycles_fractional(self.g, y_hat, self.y_col)
        if CutTag.cutset in self.model.dynamic_classes:
            cuts += separate_cutsets_fractional(
                self.dg, values[self.y_idx], self._x_hat(values), self.y_col, self.x_col
            )
        if self.cfg.clique_cuts:
            cuts += separate_cliques(self.g, y_hat, self.y_col)
        cuts.sort(key=lambda c: -c.violation(values))
        return cuts

    def _separate_integer(self, values: np.ndarray) -> list[Inequality]:
        rounded = np.round(values)
        y_hat = rounded[self.y_idx]
        cuts: list[Inequality] = []
        if CutTag.cycle in self.model.dynamic_classes:
            cuts += separate_cycles_integer(self.g, y_hat, self.y_col)
        if CutTag.cutset in self.model.dynamic_classes:
            cuts += separate_cutsets_integer(
                self.dg, y_hat, self._x_hat(rounded), self.y_col, self.x_col
            )
        return cuts

    # ── Bounds ──

    def _prunable(self, bound: float) -> bool:
        if self.integral_objective and math.floor(bound + self.cfg.int_tol) <= self.lb:
            return True
        if bound <= self.lb * (1.0 + self.cfg.rel_gap_tol) + 1e-9:
            self._pruned_max = max(self._pruned_max, bound)
            return True
        return False

    def _upper_bound(self, open_nodes: list[_Node]) -> float:
        bounds = [self.lb, self._pruned_max] + [node.bound for node in open_nodes]
        return max(bounds)

    def _elapsed(self) -> float:
        return time.perf_counter() - self._started

    def _check_time(self) -> None:
        if self._elapsed() > self.cfg.time_limit_s:
            raise _TimeUp

    def _log(self, entry: RunLogEntry) -> None:
        self.run_log.append(entry)
        logger.info(entry.as_log_line())

    def _solve(self, node: _Node):
        problem = self.problem.with_bounds(node.lower, node.upper)
        sol = solve_lp(problem, node.basis)
        if sol.status == LpStatus.iteration_limit:
            raise _LpFailure(f"LP iteration limit at depth {node.depth}")
        if sol.status == LpStatus.unbounded:
            raise SolverInvariantError("LP relaxation unbounded despite finite bounds")
        return sol

    def _is_integral(self, values: np.ndarray, columns: list[int]) -> bool:
        tol = self.cfg.int_tol
        return all(abs(values[j] - round(values[j])) <= tol for j in columns)

    def _branch_column(self, values: np.ndarray) -> int | None:
        """Most fractional y (ties: heavier, then lower index); else the most fractional x/z."""
        tol = self.cfg.int_tol
        best = None
        for v, j in enumerate(self.branch_y):
            frac = abs(values[j] - round(values[j]))
            if frac > tol:
                key = (abs(values[j] - 0.5), -self.g.weights[v], v)
                if best is None or key < best[0]:
                    best = (key, j)
        if best is not None:
            return best[1]
        for j in self.branch_other:
            frac = abs(values[j] - round(values[j]))
            if frac > tol:
                key = (abs(values[j] - 0.5), j)
                if best is None or key < best[0]:
                    best = (key, j)
        return None if best is None else best[1]

    # ── Search ──

    def _root_loop(self, node: _Node) -> None:
        """Fractional separation rounds at the root; node.bound tracks the latest LP value."""
        sol = self._solve(node)
        self.root_objectives.append(sol.objective)
        node.basis = sol.basis
        node.bound = sol.objective
        fractional = bool(self.model.dynamic_classes) or self.cfg.clique_cuts
        for rnd in range(1, self.cfg.root_fractional_rounds_max + 1):
            if not fractional or sol.status != LpStatus.optimal:
                break
            self._check_time()
            self._heuristic(sol.values)
            cuts = self._separate_fractional(sol.values)
            added = self._add_cuts(cuts[: config.ROOT_CUTS_PER_ROUND])
            self._log(RunLogEntry(
                event="root_round", round=rnd, bound=sol.objective, incumbent=self.lb,
                lp_objective=sol.objective, cuts=dict(self.cuts_added), elapsed_s=self._elapsed(),
            ))
            if not added:
                break
            sol = self._solve(node)
            self.root_objectives.append(sol.objective)
            node.basis = sol.basis
            node.bound = min(node.bound, sol.objective)

    def _process(self, node: _Node) -> list[_Node]:
        """Solve one node to a verdict: pruned, new incumbent, or two children."""
        while True:
            sol = self._solve(node)
            if sol.status == LpStatus.infeasible:
                return []
            node.bound = min(node.bound, sol.objective)
            if self._prunable(node.bound):
                return []
            values = sol.values
            if self._is_integral(values, self.branch_y + self.branch_other):
                cuts = self._separate_integer(values)
                if cuts:
                    if not self._add_cuts(cuts):
                        raise SolverInvariantError("integer separation repeated a pooled cut")
                    node.basis = sol.basis
                    continue
                self._accept(values)
                return []
            self._heuristic(values)
            if self._prunable(node.bound):
                return []
            j = self._branch_column(values)
            down = _Node(node.lower.copy(), node.upper.copy(), node.bound, sol.basis, node.depth + 1)
            up = _Node(node.lower.copy(), node.upper.copy(), node.bound, sol.basis, node.depth + 1)
            down.upper[j] = math.floor(values[j])
            up.lower[j] = math.floor(values[j]) + 1.0
            return [down, up]

    def _accept(self, values: np.ndarray) -> None:
        y_hat = np.round(values[self.y_idx])
        if self.cfg.clique_cuts and separate_cliques(self.g, y_hat, self.y_col):
            raise SolverInvariantError("clique inequality violated by an accepted integral point")
        subset = [v for v in range(self.g.n) if y_hat[v] > 0.5]
        if not self._feasible(subset):
            raise SolverInvariantError(f"accepted point {subset} is not a feasible selection")
        objective = float(self.problem.c @ values)
        tol = self.cfg.int_tol * float(sum(self.g.weights)) + 1e-6
        if abs(subset_weight(self.g, subset) - objective) > tol:
            raise SolverInvariantError("incumbent weight does not match its LP objective")
        self._offer(subset)

    @staticmethod
    def _trim_factors(open_nodes: list[_Node]) -> None:
        """Only the nodes nearest the top of the stack keep a basis inverse."""
        for i in range(len(open_nodes) - config.LP_FACTORS_KEPT - 1, -1, -1):
            basis = open_nodes[i].basis
            if basis is None or basis.factor is None:
                break
            open_nodes[i].basis = basis.without_factor()

    def _select(self, open_nodes: list[_Node]) -> _Node:
        self._selections += 1
        if self._selections % config.BEST_BOUND_EVERY == 0:
            k = max(range(len(open_nodes)), key=lambda i: open_nodes[i].bound)
            return open_nodes.pop(k)
        return open_nodes.pop()

    def run(self) -> SolveReport:
        self._started = time.perf_counter()
        if self.cfg.warm_start is not None:
            self.install_warm_start(self.cfg.warm_start)
        total_weight = float(sum(self.g.weights))
        root = _Node(
            lower=self.problem.lower.copy(), upper=self.problem.upper.copy(), bound=total_weight
        )
        open_nodes: list[_Node] = [root]
        status = SolveStatus.optimal
        message = ""
        try:
            self._root_loop(root)
            while open_nodes:
                self._check_time()
                node = self._select(open_nodes)
                if node.depth and self._prunable(node.bound):
                    continue
                self.nodes_processed += 1
                open_nodes.extend(self._process(node))
                self._trim_factors(open_nodes)
                if self.nodes_processed % config.LOG_EVERY_NODES == 0:
                    self._log(RunLogEntry(
                        event="nodes", nodes=self.nodes_processed,
                        bound=self._upper_bound(open_nodes), incumbent=self.lb,
                        cuts=dict(self.cuts_added), elapsed_s=self._elapsed(),
                    ))
        except _TimeUp:
            status = SolveStatus.time_limit
        except _LpFailure as e:
            status = SolveStatus.infeasible_model_error
            message = str(e)
            logger.error(f"Solve aborted: {e}")
            open_nodes.append(root)

        root_bound = self.root_objectives[-1] if self.root_objectives else total_weight
        ub = min(self._upper_bound(open_nodes), max(total_weight, self.lb))
        if status == SolveStatus.optimal:
            ub = max(self.lb, self._pruned_max)
        report = self._report(status, ub, root_bound, message)
        self._log(RunLogEntry(
            event="finish", nodes=self.nodes_processed, bound=report.ub, incumbent=report.lb,
            cuts=dict(self.cuts_added), elapsed_s=report.wall_time_s,
        ))
        return report

    def _report(self, status: SolveStatus, ub: float, root_bound: float, message: str) -> SolveReport:
        if not self._feasible(self.best_subset):
            raise SolverInvariantError("best subset failed final verification")
        if abs(subset_weight(self.g, self.best_subset) - self.lb) > 1e-9:
            raise SolverInvariantError("best subset weight differs from lb")
        if not math.isfinite(root_bound):
            root_bound = ub
        return SolveReport(
            status=status,
            lb=self.lb,
            ub=ub,
            best_subset=self.best_subset,
            glr_percent=compute_glr(root_bound, self.lb),
            open_gap_percent=compute_open_gap(ub, self.lb),
            root_bound=root_bound,
            root_objectives=list(self.root_objectives),
            nodes_processed=self.nodes_processed,
            cuts_added=dict(self.cuts_added),
            wall_time_s=self._elapsed(),
            message=message,
        )


def solve(g: Graph, cfg: SolveConfig | None = None) -> SolveReport:
    """Solve MWIF (or MWIT when cfg.mwit) on `g` to proven optimality or the time limit."""
    cfg = cfg or SolveConfig()
    logger.debug(
        f"Solving n={g.n} m={g.m} with {cfg.formulation.value}"
        f"{' +tree' if cfg.mwit else ''} (cliques={'on' if cfg.clique_cuts else 'off'})"
    )
    return BranchAndCutEngine(g, cfg).run()

