#!/usr/bin/env python3
"""
End-to-end acceptance run of the branch-and-cut engine.

- Step 1: Fixture optima for every formulation (MWIF) and every extendable one (MWIT)
- Step 2: Oracle agreement on random graphs, n in [4, 16]
- Step 3: Desk-scale capacity on R_50_* style instances (optional, --capacity)
- Step 4: Generate report

Every solve is also checked post hoc: pooled cuts hold at the optimum,
root bound >= lb and the root LP objective never increases across rounds.

Results:
  results/acceptance_report.json - Full JSON report
  results/acceptance.log         - Detailed log
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from datetime import datetime, timezone

import numpy as np

# ── Project setup ──
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, PROJECT_ROOT)

from src import config
from src.agents.bnc_engine import BranchAndCutEngine
from src.models.graph import Graph
from src.models.mip import Formulation
from src.models.solve import SolveConfig, SolveStatus
from src.skills.fixtures import FIXTURES
from src.skills.instance_io import gen_random
from src.skills.model_builder import complete_assignment
from src.skills.oracle import brute_force_mwif, brute_force_mwit

# ── Constants ──
EXTENDABLE = [f for f in Formulation if f != Formulation.CYC]
FIXTURE_SECONDS = 10.0
REPORT_PATH = os.path.join(config.RESULTS_DIR, "acceptance_report.json")
LOG_PATH = os.path.join(config.RESULTS_DIR, "acceptance.log")

os.makedirs(config.RESULTS_DIR, exist_ok=True)

# ── Logging ──
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S",
    handlers=[
        logging.StreamHandler(sys.stdout),
        logging.FileHandler(LOG_PATH, mode="w"),
    ],
)
logging.getLogger("src").setLevel(logging.WARNING)
logger = logging.getLogger("acceptance")


def checked_solve(g: Graph, formulation: Formulation, mwit: bool, time_limit_s: float) -> dict:
    """Solve once and return the outcome plus the list of post-hoc violations."""
    cfg = SolveConfig(formulation=formulation, mwit=mwit, time_limit_s=time_limit_s)
    engine = BranchAndCutEngine(g, cfg)
    report = engine.run()

    problems = []
    if report.root_bound < report.lb - 1e-6:
        problems.append(f"root bound {report.root_bound} below lb {report.lb}")
    objs = report.root_objectives
    if any(b > a + 1e-7 for a, b in zip(objs, objs[1:])):
        problems.append("root LP objective increased between rounds")
    if report.glr_percent < 0:
        problems.append("negative GLR")
    if report.status == SolveStatus.optimal:
        values = complete_assignment(g, engine.model, engine.vmap, report.best_subset)
        violated = [c for c in engine.cuts if c.violation(values) > 1e-6]
        if violated:
            problems.append(f"{len(violated)} pooled cuts cut off the optimum")

    return {
        "formulation": formulation.value,
        "mwit": mwit,
        "status": report.status.value,
        "lb": report.lb,
        "nodes": report.nodes_processed,
        "cuts": sum(report.cuts_added.values()),
        "seconds": round(report.wall_time_s, 3),
        "problems": problems,
    }


def run_fixtures() -> list[dict]:
    results = []
    for name, (build, mwif) in sorted(FIXTURES.items()):
        g = build()
        mwit = brute_force_mwit(g).value
        for formulation in Formulation:
            row = checked_solve(g, formulation, False, FIXTURE_SECONDS)
            row.update(instance=name, expected=mwif)
            results.append(row)
        for formulation in EXTENDABLE:
            row = checked_solve(g, formulation, True, FIXTURE_SECONDS)
            row.update(instance=name, expected=mwit)
            if not mwit < mwif:
                row["problems"].append(f"oracle MWIT {mwit} not below MWIF {mwif}")
            results.append(row)
        logger.info(f"  {name}: MWIF={mwif:g} MWIT={mwit:g}")
    return results


def run_oracle_agreement(samples: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    results = []
    for k in range(samples):
        n = int(rng.integers(4, 17))
        m = int(rng.integers(0, n * (n - 1) // 2 + 1))
        g = gen_random(n, m, 10, 75, seed=int(rng.integers(0, 2**31)))
        mwif, mwit = brute_force_mwif(g).value, brute_force_mwit(g).value
        for formulation in Formulation:
            row = checked_solve(g, formulation, False, config.TIME_LIMIT_S)
            row.update(instance=f"sample_{k}", n=n, m=m, expected=mwif)
            results.append(row)
        for formulation in EXTENDABLE:
            row = checked_solve(g, formulation, True, config.TIME_LIMIT_S)
            row.update(instance=f"sample_{k}", n=n, m=m, expected=mwit)
            results.append(row)
        if (k + 1) % 20 == 0:
            logger.info(f"  {k + 1}/{samples} samples checked")
    return results


def run_capacity(count: int) -> list[dict]:
    results = []
    for seed in range(count):
        g = gen_random(50, 232, 10, 25, seed=seed)
        for formulation in (Formulation.TCYC, Formulation.DCUT):
            row = checked_solve(g, formulation, False, config.TIME_LIMIT_S)
            row.update(instance=f"R_50_232_10_25_s{seed}", expected=None)
            results.append(row)
            logger.info(f"  s{seed} {formulation.value}: {row['status']} lb={row['lb']:g} in {row['seconds']}s")
    return results


def failures(results: list[dict]) -> list[dict]:
    bad = []
    for r in results:
        wrong_value = r["expected"] is not None and r["lb"] != r["expected"]
        if r["status"] != SolveStatus.optimal.value or wrong_value or r["problems"]:
            bad.append(r)
    return bad


def generate_report(sections: dict[str, list[dict]], elapsed: float, args) -> dict:
    summary = {}
    for name, results in sections.items():
        bad = failures(results)
        summary[name] = {
            "solves": len(results),
            "failed": len(bad),
            "max_seconds": max((r["seconds"] for r in results), default=0.0),
            "failures": bad[:20],
        }
    if "fixtures" in sections:
        slow = [r for r in sections["fixtures"] if r["seconds"] > FIXTURE_SECONDS]
        summary["fixtures"]["over_time"] = len(slow)
    return {
        "test_config": {
            "samples": args.samples,
            "seed": args.seed,
            "capacity": args.capacity,
            "time_limit_s": config.TIME_LIMIT_S,
            "run_at": datetime.now(timezone.utc).isoformat(),
            "elapsed_minutes": round(elapsed / 60, 1),
        },
        "summary": summary,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description="Acceptance run for forestcut")
    parser.add_argument("--samples", type=int, default=200, help="Random oracle samples (default: 200)")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--capacity", type=int, default=0, help="R_50_232 instances to solve (default: 0)")
    args = parser.parse_args()

    start = time.time()
    logger.info("=" * 60)
    logger.info("  FORESTCUT ACCEPTANCE")
    logger.info(f"  Oracle samples: {args.samples} (seed {args.seed})")
    logger.info(f"  Capacity instances: {args.capacity}")
    logger.info("=" * 60)

    sections: dict[str, list[dict]] = {}

    # ── Step 1: Fixtures ──
    logger.info("\n" + "=" * 50)
    logger.info("STEP 1: Fixture optima")
    logger.info("=" * 50)
    sections["fixtures"] = run_fixtures()

    # ── Step 2: Oracle agreement ──
    logger.info("\n" + "=" * 50)
    logger.info("STEP 2: Oracle agreement")
    logger.info("=" * 50)
    sections["oracle"] = run_oracle_agreement(args.samples, args.seed)

    # ── Step 3: Capacity ──
    if args.capacity:
        logger.info("\n" + "=" * 50)
        logger.info("STEP 3: Desk-scale capacity")
        logger.info("=" * 50)
        sections["capacity"] = run_capacity(args.capacity)

    # ── Step 4: Report ──
    report = generate_report(sections, time.time() - start, args)
    with open(REPORT_PATH, "w", encoding="utf-8") as f:
        json.dump(report, f, ensure_ascii=False, indent=2)

    logger.info("\n" + "=" * 60)
    logger.info("  RESULTS SUMMARY")
    logger.info("=" * 60)
    total_failed = 0
    for name, stats in report["summary"].items():
        total_failed += stats["failed"]
        logger.info(f"  {name:<10} solves={stats['solves']:<6} failed={stats['failed']:<4} "
                    f"max={stats['max_seconds']:.2f}s")
    logger.info(f"  Report: {REPORT_PATH}")
    logger.info(f"  Log:    {LOG_PATH}")
    return 1 if total_failed else 0


if __name__ == "__main__":
    sys.exit(main())
