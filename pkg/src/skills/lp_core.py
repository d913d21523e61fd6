"""
Bounded dual simplex for the LP relaxations.

Every row gets a slack column (<=: s >= 0, >=: s <= 0, =: s = 0), further
boxed by the activity range of its row over the structural bounds. With
every column boxed, any basis is made dual feasible by sending each nonbasic
column to the bound its reduced cost points at; the dual simplex then
repairs primal feasibility. The explicit basis inverse travels with the
Basis, so a child node (bounds changed) or a cut round (rows appended)
re-optimises from the parent's factor instead of refactorising.

Column indices of a basis: [0, n) structural, [n, n + m) slack of row i - n.
Rows are only ever appended, so a basis stays meaningful after adding cuts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src import config
from src.models.errors import LpBasisError, LpIterationLimit
from src.models.mip import MipModel, Row, Sense

logger = logging.getLogger(__name__)

_SENSE_CODE = {Sense.le: -1, Sense.eq: 0, Sense.ge: 1}


class LpStatus(str, Enum):
    optimal = "optimal"
    infeasible = "infeasible"
    unbounded = "unbounded"
    iteration_limit = "iteration-limit"


@dataclass(frozen=True)
class LpProblem:
    """max c.x  s.t.  A x (<=,=,>=) b,  lower <= x <= upper (all bounds finite)."""

    c: np.ndarray
    A: np.ndarray
    senses: np.ndarray
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    @property
    def n_cols(self) -> int:
        return len(self.c)

    @property
    def n_rows(self) -> int:
        return len(self.b)

    @classmethod
    def from_model(cls, model: MipModel) -> "LpProblem":
        """Relaxation of `model`: integrality dropped, static rows only."""
        n = len(model.columns)
        A, senses, b = _dense_rows(model.rows, n)
        return cls(
            c=np.array([col.obj for col in model.columns], dtype=float),
            A=A,
            senses=senses,
            b=b,
            lower=np.array([col.lower for col in model.columns], dtype=float),
            upper=np.array([col.upper for col in model.columns], dtype=float),
        )

    def with_rows(self, rows: list[Row]) -> "LpProblem":
        if not rows:
            return self
        A, senses, b = _dense_rows(rows, self.n_cols)
        return replace(
            self,
            A=np.vstack([self.A, A]),
            senses=np.concatenate([self.senses, senses]),
            b=np.concatenate([self.b, b]),
        )

    def with_bounds(self, lower: np.ndarray, upper: np.ndarray) -> "LpProblem":
        return replace(self, lower=lower, upper=upper)


def _dense_rows(rows: list[Row], n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    A = np.zeros((len(rows), n))
    for i, row in enumerate(rows):
        for j, coef in row.coeffs.items():
            A[i, j] += coef
    senses = np.array([_SENSE_CODE[row.sense] for row in rows], dtype=np.int8)
    b = np.array([row.rhs for row in rows], dtype=float)
    return A, senses, b



@dataclass(frozen=True)
class Basis:
    basic: tuple[int, ...]
    at_upper: frozenset[int] = frozenset()
    # Inverse of the basis matrix, rows ordered like `basic`. Read-only once shared.
    factor: np.ndarray | None = field(default=None, compare=False, repr=False)
    factor_age: int = field(default=0, compare=False, repr=False)

    def without_factor(self) -> "Basis":
        return replace(self, factor=None, factor_age=0) if self.factor is not None else self


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    objective: float
    values: np.ndarray
    basis: Basis | None = None
    iterations: int = 0


@dataclass
class SimplexSettings:
    feas_tol: float = field(default_factory=lambda: config.LP_FEAS_TOL)
    opt_tol: float = field(default_factory=lambda: config.LP_OPT_TOL)
    bland_after: int = field(default_factory=lambda: config.LP_BLAND_AFTER)
    iteration_factor: int = field(default_factory=lambda: config.LP_ITERATION_FACTOR)
    refactor_every: int = field(default_factory=lambda: config.LP_REFACTOR_EVERY)
    pivot_tol: float = 1e-9


def _boxes(problem: LpProblem, settings: SimplexSettings) -> tuple[np.ndarray, np.ndarray] | None:
    """Bounds of [structural | slack] columns, or None when some row cannot hold inside the box."""
    lower, upper = problem.lower, problem.upper
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
        raise ValueError("LP columns need finite bounds")
    if np.any(lower > upper + settings.feas_tol):
        return None

    A, b, senses = problem.A, problem.b, problem.senses
    pos, neg = np.maximum(A, 0.0), np.minimum(A, 0.0)
    s_lo = b - (pos @ upper + neg @ lower)
    s_hi = b - (pos @ lower + neg @ upper)
    s_lo = np.where(senses != 1, np.maximum(s_lo, 0.0), s_lo)
    s_hi = np.where(senses != -1, np.minimum(s_hi, 0.0), s_hi)
    if np.any(s_lo > s_hi + settings.feas_tol * (1.0 + np.abs(b))):
        return None
    s_hi = np.maximum(s_hi, s_lo)
    return np.concatenate([lower, s_lo]), np.concatenate([upper, s_hi])


def _initial_basic(basis: Basis | None, m: int, n_total: int) -> list[int]:
    n = n_total - m
    if basis is None:
        return [n + i for i in range(m)]
    basic = list(basis.basic)
    if len(basic) > m or len(set(basic)) != len(basic) or any(j >= n_total or j < 0 for j in basic):
        raise LpBasisError("basis does not fit the problem")
    basic += [n + i for i in range(len(basic), m)]
    if len(set(basic)) != m:
        raise LpBasisError("basis repeats a slack of an appended row")
    return basic


class _DualSimplex:
    """Revised dual simplex over [A | I] with an explicit basis inverse and current point x."""

    def __init__(
        self,
        problem: LpProblem,
        boxes: tuple[np.ndarray, np.ndarray],
        basis: Basis | None,
        settings: SimplexSettings,
    ):
        self.problem = problem
        self.settings = settings
        self.m, self.n = problem.n_rows, problem.n_cols
        self.lo, self.hi = boxes
        n_total = self.n + self.m
        self.cost = np.concatenate([problem.c, np.zeros(self.m)])

        self.basic = np.array(_initial_basic(basis, self.m, n_total), dtype=int)
        self.is_basic = np.zeros(n_total, dtype=bool)
        self.is_basic[self.basic] = True
        self.at_upper = np.zeros(n_total, dtype=bool)
        if basis is not None:
            for j in basis.at_upper:
                if 0 <= j < n_total:
                    self.at_upper[j] = True
        self.at_upper[self.is_basic] = False
        self.x = np.where(self.at_upper, self.hi, self.lo)

        self.iterations = 0
        self.since_refactor = 0
        binv = self._warm_factor(basis)
        if binv is None:
            self.refactor()
        else:
            self.binv = binv
            if basis is not None:
                # inherited factor: checked before an optimum is reported
                self.since_refactor = max(basis.factor_age, 1)

    def _warm_factor(self, basis: Basis | None) -> np.ndarray | None:
        if basis is None:
            return np.eye(self.m)
        factor = basis.factor
        k = len(basis.basic)
        if factor is None or factor.shape != (k, k):
            return None
        if k == self.m:
            return factor.copy()
        # Rows k.. were appended after the factor was taken; their slacks are basic.
        old = np.asarray(basis.basic, dtype=int)
        structural = old < self.n
        R = np.zeros((self.m - k, k))
        R[:, structural] = self.problem.A[k:, old[structural]]
        binv = np.zeros((self.m, self.m))
        binv[:k, :k] = factor
        binv[k:, :k] = -R @ factor
        binv[k:, k:] = np.eye(self.m - k)
        return binv

    def _column(self, j: int) -> np.ndarray:
        if j < self.n:
            return self.problem.A[:, j]
        col = np.zeros(self.m)
        col[j - self.n] = 1.0
        return col

    def refactor(self) -> None:
        m = self.m
        self.since_refactor = 0
        if m == 0:
            self.binv = np.zeros((0, 0))
            return
        B = np.zeros((m, m))
        structural = self.basic < self.n
        B[:, structural] = self.problem.A[:, self.basic[structural]]
        slack_pos = np.flatnonzero(~structural)
        B[self.basic[slack_pos] - self.n, slack_pos] = 1.0
        try:
            binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as e:
            raise LpBasisError(f"singular basis: {e}") from None
        if not np.all(np.isfinite(binv)) or np.max(np.abs(B @ binv - np.eye(m))) > 1e-6:
            raise LpBasisError("basis is numerically singular")
        self.binv = binv

    def _reduced_costs(self) -> tuple[np.ndarray, np.ndarray]:
        y = self.cost[self.basic] @ self.binv
        d = self.cost - np.concatenate([y @ self.problem.A, y])
        return y, d

    def _place_nonbasics(self, d: np.ndarray) -> None:
        tol = self.settings.opt_tol
        nonbasic = ~self.is_basic
        self.at_upper[nonbasic & (d > tol)] = True
        self.at_upper[nonbasic & (d < -tol)] = False
        self.at_upper[self.is_basic] = False
        self.x[nonbasic] = np.where(self.at_upper[nonbasic], self.hi[nonbasic], self.lo[nonbasic])

    def _basic_values(self) -> None:
        xn = np.where(self.is_basic, 0.0, self.x)
        rhs = self.problem.b - self.problem.A @ xn[:self.n] - xn[self.n:]
        self.x[self.basic] = self.binv @ rhs

    def _settled(self, y: np.ndarray, d: np.ndarray) -> bool:
        """Rows hold at x and the dual bound y.b + max(d.x) meets c.x."""
        if self.since_refactor == 0:
            return True
        p = self.problem
        residual = p.A @ self.x[:self.n] + self.x[self.n:] - p.b
        primal = float(self.cost @ self.x)
        bound = float(y @ p.b + np.sum(np.maximum(d * self.lo, d * self.hi)))
        scale = 1e-6 * (1.0 + abs(primal))
        return np.max(np.abs(residual), initial=0.0) <= scale and bound - primal <= scale

    def run(self, max_iter: int) -> LpStatus:
        s = self.settings
        streak = 0
        while True:
            if self.iterations >= max_iter:
                raise LpIterationLimit(f"no convergence after {self.iterations} pivots")
            y, d = self._reduced_costs()
            self._place_nonbasics(d)
            self._basic_values()

            xb = self.x[self.basic]
            lo_b, hi_b = self.lo[self.basic], self.hi[self.basic]
            violation = np.maximum(lo_b - xb, xb - hi_b)
            rows = np.flatnonzero(violation > s.feas_tol * (1.0 + np.abs(xb)))
            if rows.size == 0:
                if self._settled(y, d):
                    return LpStatus.optimal
                self.refactor()
                continue

            bland = streak >= s.bland_after
            if bland:
                r = int(min(rows, key=lambda i: self.basic[i]))
            else:
                r = int(rows[np.argmax(violation[rows])])
            increase = xb[r] < lo_b[r]

            rho = self.binv[r]
            alpha = np.concatenate([rho @ self.problem.A, rho])
            toward = alpha if increase else -alpha
            movable = ~self.is_basic & (self.hi > self.lo)
            eligible = movable & np.where(
                self.at_upper, toward > s.pivot_tol, toward < -s.pivot_tol,
            )
            cand = np.flatnonzero(eligible)
            if cand.size == 0:
                if self.since_refactor:
                    self.refactor()
                    continue
                return LpStatus.infeasible

            abs_alpha = np.abs(alpha[cand])
            ratios = np.abs(d[cand]) / abs_alpha
            if bland:
                q = int(cand[np.flatnonzero(ratios <= ratios.min() + s.opt_tol)[0]])
            else:
                # Harris: largest pivot among the ratios within tolerance of the minimum
                limit = np.min((np.abs(d[cand]) + s.opt_tol) / abs_alpha)
                within = np.flatnonzero(ratios <= limit)
                q = int(cand[within[np.argmax(abs_alpha[within])]])
            step = abs(d[q]) / abs(alpha[q])
            streak = streak + 1 if step <= s.opt_tol else 0

            self.iterations += 1
            self._pivot(r, q, leave_upper=not increase)
            if self.since_refactor >= s.refactor_every:
                self.refactor()

    def _pivot(self, r: int, q: int, leave_upper: bool) -> None:
        w = self.binv @ self._column(q)
        if abs(w[r]) < self.settings.pivot_tol:
            self.refactor()
            return
        leaving = self.basic[r]
        self.is_basic[leaving] = False
        self.at_upper[leaving] = leave_upper
        self.x[leaving] = self.hi[leaving] if leave_upper else self.lo[leaving]
        self.basic[r] = q
        self.is_basic[q] = True
        self.at_upper[q] = False

        binv = self.binv
        binv[r] /= w[r]
        w[r] = 0.0
        binv -= np.outer(w, binv[r])
        self.since_refactor += 1

    def basis(self) -> Basis:
        at_upper = frozenset(int(j) for j in np.flatnonzero(self.at_upper & ~self.is_basic))
        return Basis(
            basic=tuple(int(j) for j in self.basic), at_upper=at_upper, factor=self.binv,
            factor_age=self.since_refactor,
        )


def _solve_once(problem: LpProblem, basis: Basis | None, settings: SimplexSettings) -> LpSolution:
    boxes = _boxes(problem, settings)
    if boxes is None:
        logger.debug("LP infeasible: a row cannot hold within the column bounds")
        return LpSolution(status=LpStatus.infeasible, objective=-np.inf, values=problem.lower.copy())

    tab = _DualSimplex(problem, boxes, basis, settings)
    max_iter = settings.iteration_factor * (problem.n_rows + problem.n_cols) + 100
    status = tab.run(max_iter)
    values = np.clip(tab.x[:problem.n_cols], problem.lower, problem.upper)
    if status != LpStatus.optimal:
        logger.debug(f"LP infeasible after {tab.iterations} dual pivots")
        return LpSolution(status=status, objective=-np.inf, values=values, iterations=tab.iterations)

    return LpSolution(
        status=LpStatus.optimal,
        objective=float(problem.c @ values),
        values=values,
        basis=tab.basis(),
        iterations=tab.iterations,
    )


def solve_lp(
    problem: LpProblem,
    warm_basis: Basis | None = None,
    settings: SimplexSettings | None = None,
) -> LpSolution:
    """
    Optimal basic solution of `problem` or a definitive verdict.

    A warm basis that turns out singular, or stalls into the iteration limit,
    is retried once from the slack basis. Deterministic for identical input.
    """
    settings = settings or SimplexSettings()
    attempts = 2 if warm_basis is not None else 1
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(attempts),
            retry=retry_if_exception_type((LpBasisError, LpIterationLimit)),
            reraise=True,
        ):
            with attempt:
                basis = warm_basis if attempt.retry_state.attempt_number == 1 else None
                if basis is None and warm_basis is not None:
                    logger.debug("Warm basis rejected, solving from the slack basis")
                return _solve_once(problem, basis, settings)
    except LpIterationLimit as e:
        logger.warning(f"LP iteration limit: {e}")
        return LpSolution(
            status=LpStatus.iteration_limit, objective=np.nan,
            values=np.zeros(problem.n_cols),
        )


def resolve_with_rows(
    problem: LpProblem,
    added_rows: list[Row],
    basis: Basis | None,
    settings: SimplexSettings | None = None,
) -> tuple[LpProblem, LpSolution]:
    """Append rows and re-solve from `basis`; the new slacks join the basis."""
    augmented = problem.with_rows(added_rows)
    return augmented, solve_lp(augmented, basis, settings)

