"""Reading result CSVs and recomputing per-configuration summaries.

The input schema is the experiment harness's results CSV (one row per
negotiation). Summaries are recomputed here from the raw rows — means,
success rates, and per-metric best-equivalence flags from Welch tests —
rather than trusted from any upstream aggregate, so the two pipelines
cross-check each other.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .stats import mean, welch_t_test

REQUIRED_COLUMNS = [
    "similarity_class",
    "team_deadline_class",
    "opp_deadline_class",
    "team_size",
    "strategy",
    "team_beta_class",
    "opp_beta_class",
    "success",
    "rounds",
    "min_utility",
    "avg_utility",
]

ENV_FIELDS = (
    "similarity_class",
    "team_deadline_class",
    "opp_deadline_class",
    "team_size",
    "opp_beta_class",
)

CONFIG_FIELDS = ENV_FIELDS + ("strategy", "team_beta_class")


@dataclass(frozen=True)
class ConfigKey:
    similarity_class: str
    team_deadline_class: str
    opp_deadline_class: str
    team_size: int
    opp_beta_class: str
    strategy: str
    team_beta_class: str

    def env(self) -> tuple:
        return (
            self.similarity_class,
            self.team_deadline_class,
            self.opp_deadline_class,
            self.team_size,
            self.opp_beta_class,
        )


@dataclass
class ConfigStats:
    key: ConfigKey
    min_values: list[float]
    avg_values: list[float]
    rounds_values: list[float]
    successes: list[float]
    best_equiv_min: bool = False
    best_equiv_avg: bool = False

    @property
    def mean_min(self) -> float:
        return mean(self.min_values)

    @property
    def mean_avg(self) -> float:
        return mean(self.avg_values)

    @property
    def mean_rounds(self) -> float:
        return mean(self.rounds_values)

    @property
    def success_rate(self) -> float:
        return mean(self.successes)

    @property
    def sample_count(self) -> int:
        return len(self.min_values)


def read_result_rows(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty results CSV")
        missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ValueError(f"{path}: results CSV missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: results CSV has no data rows")
    return rows


def collect_configs(
    rows: Iterable[dict[str, str]],
    grouping: str = "strategy",
    alpha: float = 0.05,
) -> dict[ConfigKey, ConfigStats]:
    """Group rows by configuration and flag the best-equivalent set.

    ``grouping`` = "strategy" compares strategies at a fixed team beta;
    "strategy_beta" compares strategy and team beta jointly. A
    configuration is best-equivalent on a metric when it is the best mean
    in its comparison group or not significantly worse than it (Welch,
    ``alpha``).
    """
    if grouping not in ("strategy", "strategy_beta"):
        raise ValueError(f"unknown grouping {grouping!r}")

    configs: dict[ConfigKey, ConfigStats] = {}
    for row in rows:
        key = ConfigKey(
            similarity_class=row["similarity_class"],
            team_deadline_class=row["team_deadline_class"],
            opp_deadline_class=row["opp_deadline_class"],
            team_size=int(row["team_size"]),
            opp_beta_class=row["opp_beta_class"],
            strategy=row["strategy"],
            team_beta_class=row["team_beta_class"],
        )
        stats = configs.setdefault(
            key, ConfigStats(key, [], [], [], [])
        )
        stats.min_values.append(float(row["min_utility"]))
        stats.avg_values.append(float(row["avg_utility"]))
        stats.rounds_values.append(float(row["rounds"]))
        stats.successes.append(float(row["success"]))

    def group_of(key: ConfigKey) -> tuple:
        if grouping == "strategy":
            return key.env() + (key.team_beta_class,)
        return key.env()

    groups: dict[tuple, list[ConfigKey]] = {}
    for key in configs:
        groups.setdefault(group_of(key), []).append(key)

    for members in groups.values():
        for metric in ("min", "avg"):
            def metric_mean(k: ConfigKey) -> float:
                values = getattr(configs[k], f"{metric}_values")
                return mean(values)

            best_key = max(members, key=metric_mean)
            best_values = getattr(configs[best_key], f"{metric}_values")
            for key in members:
                values = getattr(configs[key], f"{metric}_values")
                if key == best_key or metric_mean(key) >= metric_mean(best_key):
                    equivalent = True
                elif len(values) < 2 or len(best_values) < 2:
                    equivalent = False
                else:
                    equivalent = not welch_t_test(values, best_values, alpha).significant
                setattr(configs[key], f"best_equiv_{metric}", equivalent)
    return configs


def read_summary_csv(path: str | Path) -> list[dict[str, str]]:
    """Harness summary CSV, used only by cross-check tooling and tests."""
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
