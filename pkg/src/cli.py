"""
Entry point CLI for the forestcut induced forest / tree solver.

Usage:
    python -m src.cli generate --class random --n 25 --m 33 --seed 1   # R_25_33_10_25_s1.txt
    python -m src.cli generate --class grid --n 5 --m 5                # 5x5 grid
    python -m src.cli solve instances/fixtures/fig3.txt                # DCUT, MWIF
    python -m src.cli solve fig5.txt --mwit --formulation tcyc         # MWIT
    python -m src.cli solve instances/*.txt --jsonl                    # batch, JSON lines
    python -m src.cli oracle instances/fixtures/fig4.txt               # brute force
    python -m src.cli compare instances/fixtures                       # MWIF vs MWIT
    python -m src.cli dump-model fig3.txt --formulation flow           # LP-file text

Exit codes: 0 success (time-limit included), 2 usage, 3 bad input, 4 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from src import config
from src.agents.bnc_engine import BranchAndCutEngine
from src.agents.compare_agent import run_compare
from src.connectors.instance_files import (
    append_jsonl,
    read_instance,
    read_warm_start,
    write_instance_file,
    write_json,
)
from src.models.errors import (
    GeneratorError,
    GraphError,
    ModelError,
    OracleRefusal,
    SolverInvariantError,
    WarmStartError,
)
from src.models.instance import GraphClass, InstanceSpec
from src.models.mip import Formulation
from src.models.solve import RunRecord, SolveConfig, SolveReport, SolveStatus
from src.skills.instance_io import generate, instance_name
from src.skills.model_builder import add_tree_restriction, build_model, dump_lp
from src.skills.oracle import brute_force_mwif, brute_force_mwit
from src.skills.warm_start import greedy_tree_warm_start, greedy_warm_start

logging.basicConfig(
    level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4

_INPUT_ERRORS = (
    GraphError,  # includes InstanceParseError
    GeneratorError,
    OracleRefusal,
    WarmStartError,
    ModelError,
    FileNotFoundError,
    ValidationError,
)


def cmd_generate(args: argparse.Namespace) -> int:
    """Generate one benchmark instance."""
    spec = InstanceSpec(
        graph_class=GraphClass(args.graph_class),
        n=args.n, m=args.m, low=args.low, up=args.up, seed=args.seed,
    )
    g = generate(spec)
    out = Path(args.out)
    path = out if out.suffix == ".txt" else out / instance_name(spec)
    write_instance_file(g, path)
    print(path)
    return EXIT_OK


def _warm_start(arg: str, g, mwit: bool) -> list[int] | None:
    if arg == "none":
        return None
    if arg == "greedy":
        return greedy_tree_warm_start(g) if mwit else greedy_warm_start(g)
    if arg.startswith("file:"):
        return read_warm_start(arg[len("file:"):])
    raise WarmStartError(f"unknown warm start {arg!r} (none, greedy, file:PATH)")


def _print_report(name: str, cfg: SolveConfig, report: SolveReport) -> None:
    cuts = ", ".join(f"{k}={v}" for k, v in report.cuts_added.items())
    print(f"Instance:    {name}")
    print(f"Problem:     {'MWIT' if cfg.mwit else 'MWIF'} ({cfg.formulation.value})")
    print(f"Status:      {report.status.value}")
    print(f"Best (lb):   {report.lb:g}")
    print(f"Bound (ub):  {report.ub:g}")
    print(f"Root bound:  {report.root_bound:.4f}")
    print(f"GLR:         {report.glr_percent:.2f}%")
    print(f"Open gap:    {report.open_gap_percent:.2f}%")
    print(f"Nodes:       {report.nodes_processed}")
    print(f"Cuts:        {cuts}")
    print(f"Time:        {report.wall_time_s:.2f}s")
    print(f"Subset:      {' '.join(str(v) for v in report.best_subset)}")


def cmd_solve(args: argparse.Namespace) -> int:
    """Solve one or more instances with the branch-and-cut engine."""
    batch = len(args.paths) > 1 or args.jsonl
    records = []
    exit_code = EXIT_OK
    for path in args.paths:
        path = Path(path)
        g = read_instance(path)
        cfg = SolveConfig(
            formulation=Formulation(args.formulation.upper()),
            mwit=args.mwit,
            time_limit_s=args.time_limit,
            rel_gap_tol=args.gap,
            root_fractional_rounds_max=args.root_rounds,
            clique_cuts=False if args.no_clique_cuts else None,
            warm_start=_warm_start(args.warm_start, g, args.mwit),
            seed=args.seed,
        )
        engine = BranchAndCutEngine(g, cfg)
        report = engine.run()
        record = RunRecord.build(path.name, cfg, report, warm_start=args.warm_start)
        records.append(record)

        if args.log_out:
            append_jsonl(engine.run_log, args.log_out)
        if batch:
            print(record.model_dump_json())
        else:
            _print_report(path.name, cfg, report)
        if report.status == SolveStatus.infeasible_model_error:
            logger.error(f"{path.name}: {report.message}")
            exit_code = EXIT_INTERNAL

    if args.json_out:
        if len(records) == 1:
            write_json(records[0], args.json_out)
        else:
            append_jsonl(records, args.json_out)
    return exit_code


def cmd_oracle(args: argparse.Namespace) -> int:
    """Brute-force optimum for small instances."""
    g = read_instance(args.path)
    result = brute_force_mwit(g) if args.mwit else brute_force_mwif(g)
    if args.json:
        print(result.model_dump_json())
    else:
        print(f"{'MWIT' if args.mwit else 'MWIF'}: {result.value:g}")
        print(f"Subset: {' '.join(str(v) for v in result.subset)}")
        print(f"Leaves: {result.enumerated}")
    return EXIT_OK


def _fmt(value: float | None, spec: str = "g") -> str:
    return "n/a" if value is None else format(value, spec)


def cmd_compare(args: argparse.Namespace) -> int:
    """MWIF vs MWIT on every instance of a directory."""
    logger.info("=" * 50)
    logger.info(f"Comparing MWIF and MWIT on {args.instance_dir}")
    logger.info("=" * 50)
    rows, summary = run_compare(
        args.instance_dir,
        formulation=Formulation(args.formulation.upper()),
        time_limit_s=args.time_limit,
        workers=args.threads,
    )
    print(f"{'instance':<32} {'class':<10} {'MWIF':>10} {'MWIT':>10} {'diff%':>8}")
    for row in rows:
        print(
            f"{row.name:<32} {row.graph_class:<10} {_fmt(row.mwif):>10} "
            f"{_fmt(row.mwit):>10} {_fmt(row.diff_percent, '.2f'):>8}"
        )
    print()
    print(f"{'group':<32} {'#inst':>6} {'#diff':>6} {'diff%':>8}")
    for row in summary:
        print(f"{row.name:<32} {row.n_instances:>6} {row.n_diff:>6} {_fmt(row.diff_percent, '.2f'):>8}")
    if args.json_out:
        append_jsonl([*rows, *summary], args.json_out)
    return EXIT_OK


def cmd_dump_model(args: argparse.Namespace) -> int:
    """Write the static model in LP-file style."""
    g = read_instance(args.path)
    model, vmap = build_model(g, Formulation(args.formulation.upper()))
    if args.mwit:
        model = add_tree_restriction(model, vmap)
    text = dump_lp(model)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info(f"Model written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _count(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {text}")
        return value
    return parse


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forestcut",
        description="Maximum weighted induced forest / tree by branch-and-cut",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m src.cli generate --class random --n 25 --m 33 --seed 1
  python -m src.cli solve instances/fixtures/fig3.txt --formulation dcut
  python -m src.cli solve instances/fixtures/fig5.txt --mwit
  python -m src.cli oracle instances/fixtures/fig4.txt
  python -m src.cli compare instances/fixtures --threads 4
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", help="Command to run")
    formulations = [f.value.lower() for f in Formulation]

    # generate
    p_gen = subparsers.add_parser("generate", help="Generate a benchmark instance")
    p_gen.add_argument("--class", dest="graph_class", required=True, choices=[c.value for c in GraphClass])
    p_gen.add_argument("--n", type=int, required=True, help="Vertices, grid rows or hypercube dimension")
    p_gen.add_argument("--m", type=int, required=True, help="Edges, grid columns or hypercube dimension")
    p_gen.add_argument("--low", type=int, default=10, help="Lowest vertex weight (default: 10)")
    p_gen.add_argument("--up", type=int, default=25, help="Highest vertex weight (default: 25)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=config.INSTANCE_DIR, help="Output directory or .txt path")

    # solve
    p_solve = subparsers.add_parser("solve", help="Solve instances by branch-and-cut")
    p_solve.add_argument("paths", nargs="+", help="Instance files")
    p_solve.add_argument("--formulation", choices=formulations, default="dcut")
    p_solve.add_argument("--mwit", action="store_true", help="Require an induced tree")
    p_solve.add_argument("--time-limit", type=_positive_float, default=config.TIME_LIMIT_S)
    p_solve.add_argument("--gap", type=_positive_float, default=config.REL_GAP_TOL, help="Relative gap tolerance")
    p_solve.add_argument(
        "--warm-start", default="none", metavar="{none,greedy,file:PATH}",
        help="Initial incumbent (default: none)",
    )
    p_solve.add_argument("--no-clique-cuts", action="store_true", help="Disable clique inequalities")
    p_solve.add_argument("--root-rounds", type=_count(0), default=config.ROOT_ROUNDS_MAX)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--json-out", default=None, help="Write the run record(s) as JSON")
    p_solve.add_argument("--jsonl", action="store_true", help="Print JSON lines even for one instance")
    p_solve.add_argument("--log-out", default=None, help="Append the run log as JSON lines")

    # oracle
    p_oracle = subparsers.add_parser("oracle", help="Brute-force optimum (n <= 25)")
    p_oracle.add_argument("path")
    p_oracle.add_argument("--mwit", action="store_true")
    p_oracle.add_argument("--json", action="store_true", help="Print the result as JSON")

    # compare
    p_cmp = subparsers.add_parser("compare", help="MWIF vs MWIT over a directory")
    p_cmp.add_argument("instance_dir")
    p_cmp.add_argument("--formulation", choices=[f for f in formulations if f != "cyc"], default="dcut")
    p_cmp.add_argument("--time-limit", type=_positive_float, default=config.TIME_LIMIT_S)
    p_cmp.add_argument("--threads", type=_count(1), default=config.THREADS, help="Parallel solves")
    p_cmp.add_argument("--json-out", default=None, help="Append rows as JSON lines")

    # dump-model
    p_dump = subparsers.add_parser("dump-model", help="Print the static MIP in LP-file style")
    p_dump.add_argument("path")
    p_dump.add_argument("--formulation", choices=formulations, default="dcut")
    p_dump.add_argument("--mwit", action="store_true")
    p_dump.add_argument("--out", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    commands = {
        "generate": cmd_generate,
        "solve": cmd_solve,
        "oracle": cmd_oracle,
        "compare": cmd_compare,
        "dump-model": cmd_dump_model,
    }
    try:
        return commands[args.command](args)
    except _INPUT_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT
    except SolverInvariantError as e:
        logger.error(f"Internal error: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
