"""
Solver configuration, reports and run records.
"""

from __future__ import annotations

from enum import Enum
from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from src import config
from src.models.mip import CutTag, Formulation

_CLIQUE_DEFAULT_ON = {Formulation.CYC, Formulation.TCYC, Formulation.DCUT}


class SolveStatus(str, Enum):
    optimal = "optimal"
    time_limit = "time-limit"
    infeasible_model_error = "infeasible-model-error"


class SolveConfig(BaseModel):
    formulation: Formulation = Formulation.DCUT
    mwit: bool = False
    time_limit_s: float = Field(default_factory=lambda: config.TIME_LIMIT_S, gt=0)
    rel_gap_tol: float = Field(default_factory=lambda: config.REL_GAP_TOL, gt=0)
    int_tol: float = Field(default_factory=lambda: config.INT_TOL, gt=0)
    root_fractional_rounds_max: int = Field(default_factory=lambda: config.ROOT_ROUNDS_MAX, ge=0)
    clique_cuts: bool | None = None
    warm_start: list[int] | None = None
    branch_rule: Literal["most-fractional-y"] = "most-fractional-y"
    seed: int = 0

    @field_validator("warm_start")
    @classmethod
    def _sorted_unique(cls, v: list[int] | None) -> list[int] | None:
        return None if v is None else sorted(set(v))

    @model_validator(mode="after")
    def _default_clique_cuts(self) -> "SolveConfig":
        if self.clique_cuts is None:
            self.clique_cuts = self.formulation in _CLIQUE_DEFAULT_ON
        return self


class RunLogEntry(BaseModel):
    event: Literal["root_round", "nodes", "finish"]
    round: int = 0
    nodes: int = 0
    bound: float
    incumbent: float
    lp_objective: float | None = None
    cuts: dict[str, int] = Field(default_factory=dict)
    elapsed_s: float = 0.0

    def as_log_line(self) -> str:
        cuts = ",".join(f"{k}:{v}" for k, v in sorted(self.cuts.items()))
        parts = [
            f"event={self.event}", f"round={self.round}", f"nodes={self.nodes}",
            f"bound={self.bound:.6g}", f"incumbent={self.incumbent:.6g}",
        ]
        if self.lp_objective is not None:
            parts.append(f"lp={self.lp_objective:.6g}")
        parts += [f"cuts={cuts or '-'}", f"elapsed={self.elapsed_s:.2f}s"]
        return " ".join(parts)


class SolveReport(BaseModel):
    status: SolveStatus
    lb: float
    ub: float
    best_subset: list[int] = Field(default_factory=list)
    glr_percent: float = 0.0
    open_gap_percent: float = 0.0
    root_bound: float
    root_objectives: list[float] = Field(default_factory=list)
    nodes_processed: int = 0
    cuts_added: dict[str, int] = Field(
        default_factory=lambda: {tag.value: 0 for tag in CutTag}
    )
    wall_time_s: float = 0.0
    message: str = ""


class RunRecord(BaseModel):
    """One solve as written to JSON / JSON lines: instance, config echo and flattened report."""

    instance: str
    formulation: Formulation
    mwit: bool
    time_limit_s: float
    rel_gap_tol: float
    clique_cuts: bool
    root_fractional_rounds_max: int
    seed: int
    warm_start: str = "none"
    status: SolveStatus
    lb: float
    ub: float
    best_subset: list[int]
    glr_percent: float
    open_gap_percent: float
    root_bound: float
    nodes_processed: int
    cuts_added: dict[str, int]
    wall_time_s: float

    @classmethod
    def build(cls, instance: str, cfg: SolveConfig, report: SolveReport, warm_start: str = "none") -> "RunRecord":
        return cls(
            instance=instance,
            formulation=cfg.formulation,
            mwit=cfg.mwit,
            time_limit_s=cfg.time_limit_s,
            rel_gap_tol=cfg.rel_gap_tol,
            clique_cuts=bool(cfg.clique_cuts),
            root_fractional_rounds_max=cfg.root_fractional_rounds_max,
            seed=cfg.seed,
            warm_start=warm_start,
            **report.model_dump(
                include={
                    "status", "lb", "ub", "best_subset", "glr_percent", "open_gap_percent",
                    "root_bound", "nodes_processed", "cuts_added", "wall_time_s",
                }
            ),
        )


class OracleResult(BaseModel):
    value: float
    subset: list[int]
    enumerated: int = 0


class CompareRow(BaseModel):
    """MWIF vs MWIT on one instance, or an aggregate over a graph class."""

    name: str
    graph_class: str = ""
    mwif: float | None = None
    mwit: float | None = None
    diff_percent: float | None = None
    n_instances: int = 1
    n_diff: int = 0

    @property
    def solved(self) -> bool:
        return self.mwif is not None and self.mwit is not None
