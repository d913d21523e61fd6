"""Gap percentages for a maximisation problem with nonnegative objective."""

from __future__ import annotations

_TOL = 1e-9


def compute_glr(root_bound: float, best: float, tol: float = _TOL) -> float:
    """Linear relaxation gap 100 * (root_bound - best) / root_bound."""
    numerator = root_bound - best
    if root_bound <= 0 or numerator <= tol:
        return 0.0
    return 100.0 * numerator / root_bound


def compute_open_gap(ub: float, lb: float, tol: float = _TOL) -> float:
    """Relative open gap 100 * (ub - lb) / ub; 0 when ub = 0."""
    numerator = ub - lb
    if ub <= 0 or numerator <= tol:
        return 0.0
    return 100.0 * numerator / ub
