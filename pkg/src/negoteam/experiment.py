"""Experiment grids: run cells, collect rows, summarize with t-tests.

Seeding is hierarchical and order-independent: every negotiation derives
its own random stream from (master seed, cell identity, team index,
opponent index, repetition), so any parallel execution order produces the
same rows and the results CSV is byte-identical across parallelism
degrees.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import stats as scipy_stats

from .agents import MemberState, OpponentState, handover_set
from .concession import (
    BetaClass,
    ConcessionParams,
    DeadlineClass,
    sample_beta,
    sample_deadline,
)
from .domain import Domain
from .population import (
    ProfilePool,
    TeamClass,
    classify_and_sample_teams,
    draw_reservation,
)
from .sections import parse_list, read_sections
from .strategies import (
    NegotiationConfig,
    NegotiationOutcome,
    Strategy,
    run_negotiation,
)

# Salts separating the seed substreams carved out of one master seed.
_SALT_TEAMS = 101
_SALT_OPPONENT_HALF = 202
_SALT_NEGOTIATION = 303

JOBS_ENV_VAR = "NEGOTEAM_JOBS"

CSV_COLUMNS = [
    "run_id",
    "seed",
    "similarity_class",
    "team_deadline_class",
    "opp_deadline_class",
    "team_size",
    "strategy",
    "team_beta_class",
    "opp_beta_class",
    "team_idx",
    "opp_idx",
    "repetition",
    "team_deadline",
    "opp_deadline",
    "team_beta",
    "opp_beta",
    "status",
    "success",
    "rounds",
    "min_utility",
    "avg_utility",
    "opp_utility",
]


@dataclass(frozen=True)
class ExperimentCell:
    """One environmental configuration of the study grid."""

    similarity: TeamClass
    team_deadline: DeadlineClass
    opp_deadline: DeadlineClass
    team_size: int
    strategy: Strategy
    team_beta: BetaClass
    opp_beta: BetaClass
    repetitions: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.team_size <= 16:
            raise ValueError(f"team size {self.team_size} outside [1, 16]")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")

    def key_ints(self) -> tuple[int, ...]:
        """Stable integer encoding used for seed substreams."""
        return (
            list(TeamClass).index(self.similarity),
            list(DeadlineClass).index(self.team_deadline),
            list(DeadlineClass).index(self.opp_deadline),
            self.team_size,
            list(Strategy).index(self.strategy),
            list(BetaClass).index(self.team_beta),
            list(BetaClass).index(self.opp_beta),
        )


@dataclass(frozen=True)
class ResultRow:
    run_id: str
    seed: int
    similarity_class: str
    team_deadline_class: str
    opp_deadline_class: str
    team_size: int
    strategy: str
    team_beta_class: str
    opp_beta_class: str
    team_idx: int
    opp_idx: int
    repetition: int
    team_deadline: int
    opp_deadline: int
    team_beta: float
    opp_beta: float
    status: str
    success: int
    rounds: int
    min_utility: float
    avg_utility: float
    opp_utility: float

    def __post_init__(self) -> None:
        if self.min_utility > self.avg_utility + 1e-12:
            raise ValueError("min utility cannot exceed average utility")


@dataclass(frozen=True)
class CellSummary:
    similarity_class: str
    team_deadline_class: str
    opp_deadline_class: str
    team_size: int
    strategy: str
    team_beta_class: str
    opp_beta_class: str
    mean_min: float
    mean_avg: float
    mean_rounds: float
    success_rate: float
    sample_count: int
    best_equiv_min: bool
    best_equiv_avg: bool


@dataclass(frozen=True)
class TTestResult:
    significant: bool
    p: float


def metric_min(member_utilities: Sequence[float]) -> float:
    if len(member_utilities) == 0:
        raise ValueError("empty utility vector")
    return float(min(member_utilities))


def metric_avg(member_utilities: Sequence[float]) -> float:
    if len(member_utilities) == 0:
        raise ValueError("empty utility vector")
    return float(np.mean(member_utilities))


def welch_t_test(
    a: Sequence[float], b: Sequence[float], alpha: float = 0.05
) -> TTestResult:
    """Two-sided Welch test; degenerate equal-constant samples give p = 1."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise ValueError("need at least two observations per sample")
    if a.var(ddof=1) == 0.0 and b.var(ddof=1) == 0.0:
        p = 1.0 if a.mean() == b.mean() else 0.0
        return TTestResult(significant=p < alpha, p=p)
    p = float(scipy_stats.ttest_ind(a, b, equal_var=False).pvalue)
    return TTestResult(significant=p < alpha, p=p)


# ---------------------------------------------------------------------------
# Running cells
# ---------------------------------------------------------------------------


def _negotiation_rng(cell: ExperimentCell, team_idx: int, opp_idx: int,
                     repetition: int) -> np.random.Generator:
    entropy = (cell.seed, _SALT_NEGOTIATION, *cell.key_ints(),
               team_idx, opp_idx, repetition)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def opponent_half(cell: ExperimentCell, pool_size: int) -> list[int]:
    """Seeded random half of the opponent pool (rounded down), per cell."""
    ss = np.random.SeedSequence((cell.seed, _SALT_OPPONENT_HALF, *cell.key_ints()))
    rng = np.random.default_rng(ss)
    return [int(i) for i in rng.permutation(pool_size)[: pool_size // 2]]


def run_single(
    cell: ExperimentCell,
    domain: Domain,
    pool: ProfilePool,
    team_members: tuple[int, ...],
    team_idx: int,
    opp_idx: int,
    repetition: int,
    run_id: str,
) -> tuple[ResultRow, NegotiationOutcome]:
    """Run one negotiation of a cell and build its result row."""
    rng = _negotiation_rng(cell, team_idx, opp_idx, repetition)
    team_deadline = sample_deadline(cell.team_deadline, rng)
    opp_deadline = sample_deadline(cell.opp_deadline, rng)
    team_beta = sample_beta(cell.team_beta, rng)
    opp_beta = sample_beta(cell.opp_beta, rng)
    opp_reservation = draw_reservation(rng)
    member_reservations = [draw_reservation(rng) for _ in team_members]
    negotiation_seed = int(rng.integers(0, 2**63))

    team = tuple(
        _build_member(pool, pool_idx, i, ru, team_deadline, team_beta)
        for i, (pool_idx, ru) in enumerate(zip(team_members, member_reservations))
    )
    opponent = OpponentState(
        profile=pool.opponent_profiles[opp_idx].with_reservation(opp_reservation),
        params=ConcessionParams(
            reservation=opp_reservation, deadline=opp_deadline, beta=opp_beta
        ),
    )
    config = NegotiationConfig(
        domain=domain,
        team=team,
        opponent=opponent,
        strategy=cell.strategy,
        team_deadline=team_deadline,
        team_beta=team_beta,
        seed=negotiation_seed,
    )
    outcome = run_negotiation(config)

    if outcome.success:
        min_u = metric_min(outcome.member_utilities)
        avg_u = metric_avg(outcome.member_utilities)
    else:
        min_u = avg_u = 0.0
    row = ResultRow(
        run_id=run_id,
        seed=cell.seed,
        similarity_class=cell.similarity.value,
        team_deadline_class=cell.team_deadline.value,
        opp_deadline_class=cell.opp_deadline.value,
        team_size=cell.team_size,
        strategy=cell.strategy.value,
        team_beta_class=cell.team_beta.value,
        opp_beta_class=cell.opp_beta.value,
        team_idx=team_idx,
        opp_idx=opp_idx,
        repetition=repetition,
        team_deadline=team_deadline,
        opp_deadline=opp_deadline,
        team_beta=team_beta,
        opp_beta=opp_beta,
        status=outcome.status.value,
        success=int(outcome.success),
        rounds=outcome.rounds,
        min_utility=min_u,
        avg_utility=avg_u,
        opp_utility=outcome.opponent_utility,
    )
    return row, outcome


def _build_member(
    pool: ProfilePool,
    pool_idx: int,
    member_id: int,
    reservation: float,
    deadline: int,
    beta: float,
    epsilon: float = 0.0,
) -> MemberState:
    profile = pool.member_profiles[pool_idx].with_reservation(reservation)
    params = ConcessionParams(
        reservation=reservation, deadline=deadline, beta=beta, epsilon=epsilon
    )
    return MemberState(
        id=member_id,
        profile=profile,
        params=params,
        ni_set=handover_set(profile, epsilon),
    )


def _run_team_block(
    args: tuple[ExperimentCell, Domain, ProfilePool, tuple[int, ...], int,
                list[int], str]
) -> list[ResultRow]:
    cell, domain, pool, team_members, team_idx, opponents, run_id = args
    rows = []
    for opp_idx in opponents:
        for rep in range(cell.repetitions):
            row, _ = run_single(
                cell, domain, pool, team_members, team_idx, opp_idx, rep, run_id
            )
            rows.append(row)
    return rows


def run_cell(
    cell: ExperimentCell,
    domain: Domain,
    pool: ProfilePool,
    teams: list[tuple[int, ...]],
    run_id: str = "",
) -> list[ResultRow]:
    """All negotiations of one cell: teams x opponent half x repetitions."""
    opponents = opponent_half(cell, len(pool.opponent_profiles))
    rows: list[ResultRow] = []
    for team_idx, team_members in enumerate(teams):
        rows.extend(
            _run_team_block(
                (cell, domain, pool, team_members, team_idx, opponents, run_id)
            )
        )
    return rows


def sample_grid_teams(
    cells: Sequence[ExperimentCell],
    pool: ProfilePool,
    master_seed: int,
    count: int,
) -> dict[tuple[TeamClass, int], list[tuple[int, ...]]]:
    """One roster per (similarity class, team size) shared across cells."""
    rosters: dict[tuple[TeamClass, int], list[tuple[int, ...]]] = {}
    for cell in cells:
        key = (cell.similarity, cell.team_size)
        if key in rosters:
            continue
        ss = np.random.SeedSequence(
            (master_seed, _SALT_TEAMS, list(TeamClass).index(key[0]), key[1])
        )
        teams, _ = classify_and_sample_teams(
            pool, key[1], key[0], np.random.default_rng(ss), count=count
        )
        rosters[key] = teams
    return rosters


def grid_run_id(master_seed: int, cells: Sequence[ExperimentCell]) -> str:
    digest = hashlib.sha256()
    digest.update(str(master_seed).encode())
    for cell in cells:
        digest.update(repr((cell.key_ints(), cell.repetitions)).encode())
    return digest.hexdigest()[:12]


def run_grid(
    cells: Sequence[ExperimentCell],
    domain: Domain,
    pool: ProfilePool,
    master_seed: int,
    teams_per_class: int = 100,
    jobs: int = 1,
) -> list[ResultRow]:
    """Run every cell of a grid, optionally across processes.

    Rows come back in deterministic (cell, team, opponent, repetition)
    order regardless of the parallelism degree.
    """
    cells = [replace(c, seed=master_seed) for c in cells]
    rosters = sample_grid_teams(cells, pool, master_seed, teams_per_class)
    run_id = grid_run_id(master_seed, cells)

    tasks = []
    for cell in cells:
        opponents = opponent_half(cell, len(pool.opponent_profiles))
        for team_idx, team_members in enumerate(
            rosters[(cell.similarity, cell.team_size)]
        ):
            tasks.append(
                (cell, domain, pool, team_members, team_idx, opponents, run_id)
            )

    if jobs <= 1:
        blocks = [_run_team_block(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool_exec:
            blocks = list(pool_exec.map(_run_team_block, tasks, chunksize=4))
    return [row for block in blocks for row in block]


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------


def rows_to_csv_text(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_format_field(getattr(row, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def _format_field(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows_csv(rows: Iterable[ResultRow], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv_text(rows))


def read_rows_csv(path: str | Path) -> list[ResultRow]:
    text = Path(path).read_text()
    return rows_from_csv_text(text)


def rows_from_csv_text(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return []
    missing = [c for c in CSV_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise ValueError(f"results CSV missing columns: {missing}")
    types = {f.name: f.type for f in fields(ResultRow)}
    rows = []
    for record in reader:
        kwargs = {}
        for col in CSV_COLUMNS:
            t = types[col]
            raw = record[col]
            if t == "int":
                kwargs[col] = int(raw)
            elif t == "float":
                kwargs[col] = float(raw)
            else:
                kwargs[col] = raw
        rows.append(ResultRow(**kwargs))
    return rows


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------

_ENV_FIELDS = (
    "similarity_class",
    "team_deadline_class",
    "opp_deadline_class",
    "team_size",
    "opp_beta_class",
)

CONFIG_FIELDS = _ENV_FIELDS + ("strategy", "team_beta_class")


def summarize(
    rows: Sequence[ResultRow],
    grouping: str = "strategy",
    alpha: float = 0.05,
) -> list[CellSummary]:
    """Per-configuration means plus best-equivalence flags.

    Configurations sharing an environment are compared per metric against
    the best mean; any configuration not significantly worse (Welch,
    ``alpha``) is flagged best-equivalent. ``grouping`` picks what varies
    inside a comparison group: only the strategy (team beta fixed) or
    strategy and team beta jointly.
    """
    if grouping not in ("strategy", "strategy_beta"):
        raise ValueError(f"unknown grouping {grouping!r}")

    by_config: dict[tuple, dict[str, list[float]]] = {}
    for row in rows:
        key = tuple(getattr(row, f) for f in CONFIG_FIELDS)
        data = by_config.setdefault(
            key, {"min": [], "avg": [], "rounds": [], "success": []}
        )
        data["min"].append(row.min_utility)
        data["avg"].append(row.avg_utility)
        data["rounds"].append(float(row.rounds))
        data["success"].append(float(row.success))

    def group_key(config_key: tuple) -> tuple:
        env = config_key[: len(_ENV_FIELDS)]
        if grouping == "strategy":
            return env + (config_key[len(_ENV_FIELDS) + 1],)  # + team beta
        return env

    groups: dict[tuple, list[tuple]] = {}
    for key in by_config:
        groups.setdefault(group_key(key), []).append(key)

    flags: dict[tuple, dict[str, bool]] = {key: {} for key in by_config}
    for members in groups.values():
        for metric in ("min", "avg"):
            best_key = max(members, key=lambda k: np.mean(by_config[k][metric]))
            best = by_config[best_key][metric]
            for key in members:
                sample = by_config[key][metric]
                if key == best_key or np.mean(sample) >= np.mean(best):
                    equivalent = True
                elif len(sample) < 2 or len(best) < 2:
                    equivalent = False
                else:
                    equivalent = not welch_t_test(sample, best, alpha).significant
                flags[key][metric] = equivalent

    summaries = []
    for key in sorted(by_config):
        data = by_config[key]
        summaries.append(
            CellSummary(
                **dict(zip(CONFIG_FIELDS, key)),
                mean_min=float(np.mean(data["min"])),
                mean_avg=float(np.mean(data["avg"])),
                mean_rounds=float(np.mean(data["rounds"])),
                success_rate=float(np.mean(data["success"])),
                sample_count=len(data["min"]),
                best_equiv_min=flags[key]["min"],
                best_equiv_avg=flags[key]["avg"],
            )
        )
    return summaries


SUMMARY_COLUMNS = [
    "similarity_class",
    "team_deadline_class",
    "opp_deadline_class",
    "team_size",
    "opp_beta_class",
    "strategy",
    "team_beta_class",
    "mean_min",
    "mean_avg",
    "mean_rounds",
    "success_rate",
    "sample_count",
    "best_equiv_min",
    "best_equiv_avg",
]


def summaries_to_csv_text(summaries: Sequence[CellSummary]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for s in summaries:
        writer.writerow([_format_field(getattr(s, col)) for col in SUMMARY_COLUMNS])
    return buf.getvalue()


def summaries_to_tables(summaries: Sequence[CellSummary]) -> str:
    """Plain-text tables, one block per environment."""
    blocks: dict[tuple, list[CellSummary]] = {}
    for s in summaries:
        env = tuple(getattr(s, f) for f in _ENV_FIELDS)
        blocks.setdefault(env, []).append(s)
    out: list[str] = []
    for env in sorted(blocks):
        head = dict(zip(_ENV_FIELDS, env))
        out.append(
            "environment: similarity={similarity_class} team_deadline="
            "{team_deadline_class} opp_deadline={opp_deadline_class} "
            "team_size={team_size} opp_beta={opp_beta_class}".format(**head)
        )
        out.append(
            f"{'config':<12} {'Min.':>8} {'Ave.':>8} {'Ro.':>8} "
            f"{'succ':>6} {'n':>6} {'bestMin':>8} {'bestAve':>8}"
        )
        for s in sorted(blocks[env], key=lambda x: (x.strategy, x.team_beta_class)):
            config = f"{s.strategy} b={s.team_beta_class}"
            out.append(
                f"{config:<12} {s.mean_min:>8.3f} {s.mean_avg:>8.3f} "
                f"{s.mean_rounds:>8.2f} {s.success_rate:>6.2f} "
                f"{s.sample_count:>6d} {str(s.best_equiv_min):>8} "
                f"{str(s.best_equiv_avg):>8}"
            )
        out.append("")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# Grid files
# ---------------------------------------------------------------------------
#
# A grid file holds an optional [defaults] section (teams, repetitions) and
# one or more [cells] sections; every key of a [cells] section may list
# several comma-separated values and the section expands to their cartesian
# product.

_GRID_KEYS = {
    "similarity": TeamClass,
    "team_deadline": DeadlineClass,
    "opp_deadline": DeadlineClass,
    "team_size": int,
    "strategy": Strategy,
    "team_beta": BetaClass,
    "opp_beta": BetaClass,
}


@dataclass(frozen=True)
class GridSpec:
    cells: tuple[ExperimentCell, ...]
    teams_per_class: int = 100


def grid_from_text(text: str) -> GridSpec:
    teams_per_class = 100
    repetitions = 4
    cells: list[ExperimentCell] = []
    for header, fields_ in read_sections(text):
        if header == "defaults":
            teams_per_class = int(fields_.get("teams", teams_per_class))
            repetitions = int(fields_.get("repetitions", repetitions))
        elif header in ("cells", "cell"):
            missing = [k for k in _GRID_KEYS if k not in fields_]
            if missing:
                raise ValueError(f"[{header}] section missing keys: {missing}")
            option_lists = []
            for key, kind in _GRID_KEYS.items():
                raw_values = parse_list(fields_[key])
                option_lists.append([kind(v) for v in raw_values])
            reps = int(fields_.get("repetitions", repetitions))
            stack = [()]
            for options in option_lists:
                stack = [combo + (v,) for combo in stack for v in options]
            for combo in stack:
                sim, tdl, odl, size, strat, tbeta, obeta = combo
                cells.append(
                    ExperimentCell(
                        similarity=sim,
                        team_deadline=tdl,
                        opp_deadline=odl,
                        team_size=size,
                        strategy=strat,
                        team_beta=tbeta,
                        opp_beta=obeta,
                        repetitions=reps,
                    )
                )
        else:
            raise ValueError(f"unexpected section [{header}] in grid file")
    if not cells:
        raise ValueError("grid file defines no cells")
    return GridSpec(cells=tuple(cells), teams_per_class=teams_per_class)


def load_grid(path: str | Path) -> GridSpec:
    return grid_from_text(Path(path).read_text())


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
