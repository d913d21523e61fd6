"""
MWIF vs MWIT comparison over a directory of instances: solve -> diff -> aggregate.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from src import config
from src.agents.bnc_engine import solve
from src.connectors.instance_files import list_instances, read_instance
from src.models.errors import ModelError
from src.models.mip import Formulation
from src.models.solve import CompareRow, SolveConfig, SolveStatus
from src.skills.instance_io import parse_instance_name

logger = logging.getLogger(__name__)

_SAME_TOL = 1e-9


def _graph_class(path: Path) -> str:
    spec = parse_instance_name(path.name)
    return spec.graph_class.value if spec else "other"


def compare_instance(path: str, formulation: Formulation, time_limit_s: float) -> CompareRow:
    """Solve one instance twice; mwif/mwit stay None unless proven optimal."""
    path = Path(path)
    g = read_instance(path)
    values = {}
    for mwit in (False, True):
        cfg = SolveConfig(formulation=formulation, mwit=mwit, time_limit_s=time_limit_s)
        report = solve(g, cfg)
        values[mwit] = report.lb if report.status == SolveStatus.optimal else None

    row = CompareRow(name=path.name, graph_class=_graph_class(path), mwif=values[False], mwit=values[True])
    if row.solved:
        differs = row.mwif - row.mwit > _SAME_TOL
        row.n_diff = int(differs)
        row.diff_percent = 100.0 * (row.mwif - row.mwit) / row.mwif if differs else 0.0
    logger.info(
        f"{row.name}: MWIF={row.mwif if row.mwif is not None else 'n/a'} "
        f"MWIT={row.mwit if row.mwit is not None else 'n/a'}"
    )
    return row


def aggregate(rows: list[CompareRow]) -> list[CompareRow]:
    """One row per graph class plus an overall row; unsolved instances are left out."""
    groups: dict[str, list[CompareRow]] = defaultdict(list)
    for row in rows:
        if row.solved:
            groups[row.graph_class].append(row)
    solved = [row for row in rows if row.solved]

    out = []
    for name, members in [*sorted(groups.items()), ("overall", solved)]:
        diffs = [r.diff_percent for r in members if r.n_diff]
        out.append(CompareRow(
            name=name,
            graph_class=name,
            n_instances=len(members),
            n_diff=len(diffs),
            diff_percent=sum(diffs) / len(diffs) if diffs else 0.0,
        ))
    return out


def run_compare(
    instance_dir: str | Path,
    formulation: Formulation = Formulation.DCUT,
    time_limit_s: float | None = None,
    workers: int | None = None,
) -> tuple[list[CompareRow], list[CompareRow]]:
    """
    Compare MWIF and MWIT optima on every instance of `instance_dir`.

    Returns:
        (per-instance rows, aggregate rows)
    """
    if formulation == Formulation.CYC:
        raise ModelError("formulation not extendable: compare needs a formulation with a tree restriction")
    time_limit_s = time_limit_s or config.TIME_LIMIT_S
    workers = workers or config.THREADS
    paths = [str(p) for p in list_instances(instance_dir)]
    logger.info(f"Comparing {len(paths)} instances with {formulation.value} ({workers} workers)")

    if workers <= 1 or len(paths) <= 1:
        rows = [compare_instance(p, formulation, time_limit_s) for p in paths]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(
                compare_instance, paths, [formulation] * len(paths), [time_limit_s] * len(paths)
            ))
    return rows, aggregate(rows)
