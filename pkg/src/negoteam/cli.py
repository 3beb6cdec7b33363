"""Command line interface: gen-pool, run, summarize, trace."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .concession import BetaClass, DeadlineClass
from .domain import load_scenario
from .experiment import (
    ExperimentCell,
    default_jobs,
    grid_run_id,
    load_grid,
    opponent_half,
    read_rows_csv,
    rows_to_csv_text,
    run_grid,
    run_single,
    sample_grid_teams,
    summaries_to_csv_text,
    summaries_to_tables,
    summarize,
)
from .population import TeamClass, generate_pool, load_pool, save_pool
from .strategies import Strategy, trace_to_jsonl


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="negoteam",
        description="Team-vs-opponent negotiation simulation harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-pool", help="generate a utility-profile pool file")
    gen.add_argument("--scenario", required=True, type=Path)
    gen.add_argument("--seed", required=True, type=int)
    gen.add_argument("--output", required=True, type=Path)
    gen.add_argument("--size", type=int, default=25)

    run = sub.add_parser("run", help="run an experiment grid, write results CSV")
    run.add_argument("--scenario", required=True, type=Path)
    run.add_argument("--pool", required=True, type=Path)
    run.add_argument("--grid", required=True, type=Path)
    run.add_argument("--seed", required=True, type=int)
    run.add_argument("--output", required=True, type=Path)
    run.add_argument(
        "--jobs", type=int, default=None,
        help="parallel workers (default: NEGOTEAM_JOBS env var, else 1)",
    )
    run.add_argument(
        "--teams", type=int, default=None,
        help="override teams per similarity class from the grid file",
    )

    summ = sub.add_parser("summarize", help="aggregate a results CSV")
    summ.add_argument("--input", required=True, type=Path)
    summ.add_argument("--output", required=True, type=Path)
    summ.add_argument("--tables", type=Path, default=None,
                      help="also write plain-text tables here")
    summ.add_argument("--grouping", choices=["strategy", "strategy_beta"],
                      default="strategy")

    trace = sub.add_parser("trace", help="replay one negotiation, print events")
    trace.add_argument("--scenario", required=True, type=Path)
    trace.add_argument("--pool", required=True, type=Path)
    trace.add_argument("--seed", required=True, type=int)
    trace.add_argument("--similarity", required=True,
                       choices=[c.value for c in TeamClass])
    trace.add_argument("--team-deadline", required=True,
                       choices=[c.value for c in DeadlineClass])
    trace.add_argument("--opp-deadline", required=True,
                       choices=[c.value for c in DeadlineClass])
    trace.add_argument("--team-size", required=True, type=int)
    trace.add_argument("--strategy", required=True,
                       choices=[s.value for s in Strategy])
    trace.add_argument("--team-beta", required=True,
                       choices=[c.value for c in BetaClass])
    trace.add_argument("--opp-beta", required=True,
                       choices=[c.value for c in BetaClass])
    trace.add_argument("--team-idx", required=True, type=int)
    trace.add_argument("--opp-idx", required=True, type=int)
    trace.add_argument("--rep", required=True, type=int)
    trace.add_argument("--teams", type=int, default=100,
                       help="teams per class used by the original run")
    trace.add_argument("--repetitions", type=int, default=4)

    return parser


def _cmd_gen_pool(args: argparse.Namespace) -> int:
    domain = load_scenario(args.scenario)
    pool = generate_pool(domain, np.random.default_rng(args.seed), size=args.size)
    try:
        save_pool(pool, domain, args.output)
    except Exception:
        args.output.unlink(missing_ok=True)
        raise
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    domain = load_scenario(args.scenario)
    pool = load_pool(args.pool, domain)
    grid = load_grid(args.grid)
    jobs = args.jobs if args.jobs is not None else default_jobs()
    teams_per_class = args.teams if args.teams is not None else grid.teams_per_class
    rows = run_grid(
        grid.cells, domain, pool, args.seed,
        teams_per_class=teams_per_class, jobs=jobs,
    )
    try:
        args.output.write_text(rows_to_csv_text(rows))
    except Exception:
        args.output.unlink(missing_ok=True)
        raise
    return 0


def _cmd_summarize(args: argparse.Namespace) -> int:
    rows = read_rows_csv(args.input)
    if not rows:
        print(f"error: no result rows in {args.input}", file=sys.stderr)
        return 2
    summaries = summarize(rows, grouping=args.grouping)
    try:
        args.output.write_text(summaries_to_csv_text(summaries))
        if args.tables is not None:
            args.tables.write_text(summaries_to_tables(summaries))
    except Exception:
        args.output.unlink(missing_ok=True)
        if args.tables is not None:
            args.tables.unlink(missing_ok=True)
        raise
    return 0


def _cmd_trace(args: argparse.Namespace) -> int:
    domain = load_scenario(args.scenario)
    pool = load_pool(args.pool, domain)
    cell = ExperimentCell(
        similarity=TeamClass(args.similarity),
        team_deadline=DeadlineClass(args.team_deadline),
        opp_deadline=DeadlineClass(args.opp_deadline),
        team_size=args.team_size,
        strategy=Strategy(args.strategy),
        team_beta=BetaClass(args.team_beta),
        opp_beta=BetaClass(args.opp_beta),
        repetitions=args.repetitions,
        seed=args.seed,
    )
    rosters = sample_grid_teams([cell], pool, args.seed, args.teams)
    teams = rosters[(cell.similarity, cell.team_size)]
    if not 0 <= args.team_idx < len(teams):
        print(f"error: team index {args.team_idx} outside roster of "
              f"{len(teams)} teams", file=sys.stderr)
        return 2
    opponents = opponent_half(cell, len(pool.opponent_profiles))
    if args.opp_idx not in opponents:
        print(f"error: opponent {args.opp_idx} not in this cell's half "
              f"{sorted(opponents)}", file=sys.stderr)
        return 2
    run_id = grid_run_id(args.seed, [cell])
    row, outcome = run_single(
        cell, domain, pool, teams[args.team_idx],
        args.team_idx, args.opp_idx, args.rep, run_id,
    )
    print(trace_to_jsonl(outcome.trace))
    print(
        f"# status={row.status} rounds={row.rounds} "
        f"min={row.min_utility!r} avg={row.avg_utility!r}",
        file=sys.stderr,
    )
    return 0


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "gen-pool": _cmd_gen_pool,
        "run": _cmd_run,
        "summarize": _cmd_summarize,
        "trace": _cmd_trace,
    }
    try:
        return handlers[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
