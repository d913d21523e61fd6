"""
Exception hierarchy shared by every layer. The CLI maps these to exit codes.
"""

from __future__ import annotations


class ForestcutError(Exception):
    """Base class for all domain errors."""


class GraphError(ForestcutError):
    """Ill-formed graph or invalid vertex subset."""


class InstanceParseError(GraphError):
    """Instance text that does not follow the canonical format."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class GeneratorError(ForestcutError):
    """Invalid instance generator parameters."""


class ModelError(ForestcutError):
    """Invalid operation on a MIP model."""


class OracleRefusal(ForestcutError):
    """Instance too large for brute-force enumeration."""


class WarmStartError(ForestcutError):
    """Warm start vertex set is not a feasible solution."""


class LpBasisError(ForestcutError):
    """A supplied basis is singular or does not fit the problem."""


class LpIterationLimit(ForestcutError):
    """Simplex exceeded its iteration budget."""


class SolverInvariantError(ForestcutError):
    """An internal soundness check failed. Always a bug."""
