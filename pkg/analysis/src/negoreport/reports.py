"""Markdown tables and SVG figures from negotiation result CSVs.

Five selectors mirror the experiment study's presentation artifacts:

* ``table2``          — rounds per strategy/team-beta, long deadlines
* ``table3``          — Min/Ave/rounds, same deadline type on both sides
* ``table4``          — Min/Ave/rounds, short team vs long opponent deadline
* ``fig_long_team``   — metric vs opponent concession class, short opponent
                        deadline, one series per strategy
* ``fig_teamsize``    — metric vs team size, one series per strategy

Best-equivalent configurations (not significantly worse than the best in
their comparison group) are bolded in tables; uniquely best configurations
get marker rings in figures.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .results import ConfigKey, ConfigStats, collect_configs, read_result_rows
from .svg import Series, line_chart

SELECTORS = ("table2", "table3", "table4", "fig_long_team", "fig_teamsize")

OPP_BETA_ORDER = ["VC", "C", "B", "VB"]
TEAM_BETA_ORDER = ["VB", "B", "C", "VC"]
STRATEGY_ORDER = ["RE", "SSV", "SBV", "FUM"]


@dataclass(frozen=True)
class ReportSpec:
    input_csv: str | Path
    selector: str
    output_dir: str | Path
    grouping: str = "strategy"

    def __post_init__(self) -> None:
        if self.selector not in SELECTORS:
            raise ValueError(
                f"unknown selector {self.selector!r}; choose from {SELECTORS}"
            )


class MissingCellsError(ValueError):
    def __init__(self, missing: list[tuple]):
        self.missing = missing
        listing = "; ".join(str(m) for m in missing[:20])
        more = "" if len(missing) <= 20 else f" (+{len(missing) - 20} more)"
        super().__init__(f"results CSV lacks required cells: {listing}{more}")


def _deadline_filter(selector: str, key: ConfigKey) -> bool:
    if selector == "table2":
        return key.team_deadline_class == "L" and key.opp_deadline_class == "L"
    if selector == "table3":
        return key.team_deadline_class == key.opp_deadline_class
    if selector == "table4":
        return key.team_deadline_class == "S" and key.opp_deadline_class == "L"
    if selector == "fig_long_team":
        return key.opp_deadline_class == "S"
    return key.team_deadline_class == key.opp_deadline_class  # fig_teamsize


def _select_configs(
    spec: ReportSpec,
) -> dict[ConfigKey, ConfigStats]:
    rows = read_result_rows(spec.input_csv)
    configs = collect_configs(rows, grouping=spec.grouping)
    selected = {
        k: v for k, v in configs.items() if _deadline_filter(spec.selector, k)
    }
    if not selected:
        raise MissingCellsError(
            [(spec.selector, "no rows match the selector's deadline conditions")]
        )
    return selected


def _bold(text: str, flag: bool) -> str:
    return f"**{text}**" if flag else text


def _strategies_present(configs: dict[ConfigKey, ConfigStats]) -> list[str]:
    present = {k.strategy for k in configs}
    return [s for s in STRATEGY_ORDER if s in present]


def _check_cells(
    configs: dict[ConfigKey, ConfigStats], required: list[tuple]
) -> None:
    missing = [key for key in required if key not in configs]
    if missing:
        raise MissingCellsError(missing)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def render_table(spec: ReportSpec) -> Path:
    configs = _select_configs(spec)
    out_dir = Path(spec.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if spec.selector == "table2":
        text = _rounds_table(configs)
    else:
        text = _metric_table(configs)
    path = out_dir / f"{spec.selector}.md"
    path.write_text(text)
    return path


def _blocks(configs: dict[ConfigKey, ConfigStats]) -> dict[tuple, dict]:
    """Group by (similarity, team deadline, opp deadline, team size)."""
    blocks: dict[tuple, dict] = {}
    for key, stats in configs.items():
        block_key = (
            key.similarity_class,
            key.team_deadline_class,
            key.opp_deadline_class,
            key.team_size,
        )
        blocks.setdefault(block_key, {})[key] = stats
    return blocks


def _block_title(block_key: tuple) -> str:
    sim, tdl, odl, size = block_key
    return (
        f"{sim.replace('_', ' ')}, team deadline {tdl}, "
        f"opponent deadline {odl}, team size {size}"
    )


def _rounds_table(configs: dict[ConfigKey, ConfigStats]) -> str:
    lines = ["# Rounds by strategy and concession speed", ""]
    for block_key in sorted(_blocks(configs)):
        block = _blocks(configs)[block_key]
        betas = [
            b for b in OPP_BETA_ORDER
            if any(k.opp_beta_class == b for k in block)
        ]
        strategies = _strategies_present(block)
        team_betas = sorted(
            {k.team_beta_class for k in block},
            key=TEAM_BETA_ORDER.index,
        )
        required = []
        rows = []
        for tb in team_betas:
            for strat in strategies:
                cells = []
                for ob in betas:
                    match = [
                        stats
                        for key, stats in block.items()
                        if key.strategy == strat
                        and key.team_beta_class == tb
                        and key.opp_beta_class == ob
                    ]
                    if not match:
                        required.append((strat, tb, ob) + block_key)
                        cells.append("")
                        continue
                    cells.append(f"{match[0].mean_rounds:.2f}")
                rows.append((f"{strat} b={tb}", cells))
        if required:
            raise MissingCellsError(required)
        lines.append(f"## {_block_title(block_key)}")
        lines.append("")
        header = "| config | " + " | ".join(f"b_op={b} Ro." for b in betas) + " |"
        lines.append(header)
        lines.append("|" + "---|" * (len(betas) + 1))
        for label, cells in rows:
            lines.append("| " + label + " | " + " | ".join(cells) + " |")
        lines.append("")
    return "\n".join(lines)


def _metric_table(configs: dict[ConfigKey, ConfigStats]) -> str:
    lines = ["# Minimum / average member utility and rounds", ""]
    for block_key in sorted(_blocks(configs)):
        block = _blocks(configs)[block_key]
        betas = [
            b for b in OPP_BETA_ORDER
            if any(k.opp_beta_class == b for k in block)
        ]
        strategies = _strategies_present(block)
        team_betas = sorted(
            {k.team_beta_class for k in block}, key=TEAM_BETA_ORDER.index
        )
        lines.append(f"## {_block_title(block_key)}")
        lines.append("")
        header = "| config |"
        for b in betas:
            header += f" b_op={b} Min. | b_op={b} Ave. | b_op={b} Ro. |"
        lines.append(header)
        lines.append("|" + "---|" * (3 * len(betas) + 1))
        required = []
        for tb in team_betas:
            for strat in strategies:
                cells = []
                for ob in betas:
                    match = [
                        stats
                        for key, stats in block.items()
                        if key.strategy == strat
                        and key.team_beta_class == tb
                        and key.opp_beta_class == ob
                    ]
                    if not match:
                        required.append((strat, tb, ob) + block_key)
                        cells.extend(["", "", ""])
                        continue
                    s = match[0]
                    cells.append(_bold(f"{s.mean_min:.3f}", s.best_equiv_min))
                    cells.append(_bold(f"{s.mean_avg:.3f}", s.best_equiv_avg))
                    cells.append(f"{s.mean_rounds:.2f}")
                lines.append(
                    f"| {strat} b={tb} | " + " | ".join(cells) + " |"
                )
        if required:
            raise MissingCellsError(required)
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------


def render_figure(spec: ReportSpec) -> list[Path]:
    configs = _select_configs(spec)
    out_dir = Path(spec.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if spec.selector == "fig_teamsize":
        return _teamsize_figures(configs, out_dir)
    return _beta_figures(configs, out_dir, spec.selector)


def _uniquely_best(
    group: list[ConfigStats], metric: str
) -> set[ConfigKey]:
    flagged = [s for s in group if getattr(s, f"best_equiv_{metric}")]
    if len(flagged) == 1:
        return {flagged[0].key}
    return set()


def _beta_figures(
    configs: dict[ConfigKey, ConfigStats], out_dir: Path, selector: str
) -> list[Path]:
    paths = []
    envs = sorted(
        {
            (k.similarity_class, k.team_deadline_class, k.opp_deadline_class,
             k.team_size, k.team_beta_class)
            for k in configs
        }
    )
    for sim, tdl, odl, size, tb in envs:
        sub = {
            k: v
            for k, v in configs.items()
            if (k.similarity_class, k.team_deadline_class,
                k.opp_deadline_class, k.team_size, k.team_beta_class)
            == (sim, tdl, odl, size, tb)
        }
        betas = [
            b for b in OPP_BETA_ORDER if any(k.opp_beta_class == b for k in sub)
        ]
        strategies = _strategies_present(sub)
        required = [
            next(
                (k for k in sub
                 if k.strategy == s and k.opp_beta_class == b),
                ("missing", s, b, sim, tdl, odl, size, tb),
            )
            for s in strategies
            for b in betas
        ]
        bad = [r for r in required if isinstance(r, tuple) and r and r[0] == "missing"]
        if bad:
            raise MissingCellsError(bad)
        for metric, label in (("min", "minimum member utility"),
                              ("avg", "average member utility")):
            series = []
            for strat in strategies:
                values, marked = [], set()
                for i, ob in enumerate(betas):
                    key = next(
                        k for k in sub
                        if k.strategy == strat and k.opp_beta_class == ob
                    )
                    values.append(getattr(sub[key], f"mean_{metric}"))
                    column = [
                        v for k, v in sub.items() if k.opp_beta_class == ob
                    ]
                    if key in _uniquely_best(column, metric):
                        marked.add(i)
                series.append(Series(label=strat, values=values, marked=marked))
            title = (f"{label}: {sim.replace('_', ' ')}, team {tdl} vs "
                     f"opponent {odl}, M={size}, b_A={tb}")
            name = f"{selector}_{sim}_t{tdl}_o{odl}_m{size}_b{tb}_{metric}.svg"
            path = out_dir / name
            path.write_text(line_chart(
                title, [f"b_op={b}" for b in betas], series, label,
                y_range=(0.0, 1.0),
            ))
            paths.append(path)
    return paths


def _teamsize_figures(
    configs: dict[ConfigKey, ConfigStats], out_dir: Path
) -> list[Path]:
    # the representative strategy ignores team size by construction and is
    # excluded from the size study
    configs = {k: v for k, v in configs.items() if k.strategy != "RE"}
    if not configs:
        raise MissingCellsError([("fig_teamsize", "no non-representative rows")])
    paths = []
    envs = sorted(
        {
            (k.similarity_class, k.team_deadline_class, k.opp_deadline_class,
             k.opp_beta_class, k.team_beta_class)
            for k in configs
        }
    )
    for sim, tdl, odl, ob, tb in envs:
        sub = {
            k: v
            for k, v in configs.items()
            if (k.similarity_class, k.team_deadline_class,
                k.opp_deadline_class, k.opp_beta_class, k.team_beta_class)
            == (sim, tdl, odl, ob, tb)
        }
        sizes = sorted({k.team_size for k in sub})
        strategies = _strategies_present(sub)
        missing = [
            (s, size, sim, tdl, odl, ob, tb)
            for s in strategies
            for size in sizes
            if not any(k.strategy == s and k.team_size == size for k in sub)
        ]
        if missing:
            raise MissingCellsError(missing)
        for metric, label in (("min", "minimum member utility"),
                              ("avg", "average member utility")):
            series = []
            for strat in strategies:
                values, marked = [], set()
                for i, size in enumerate(sizes):
                    key = next(
                        k for k in sub
                        if k.strategy == strat and k.team_size == size
                    )
                    values.append(getattr(sub[key], f"mean_{metric}"))
                    column = [v for k, v in sub.items() if k.team_size == size]
                    if key in _uniquely_best(column, metric):
                        marked.add(i)
                series.append(Series(label=strat, values=values, marked=marked))
            title = (f"{label} vs team size: {sim.replace('_', ' ')}, "
                     f"deadlines {tdl}/{odl}, b_op={ob}, b_A={tb}")
            name = f"fig_teamsize_{sim}_t{tdl}_o{odl}_b{ob}_bA{tb}_{metric}.svg"
            path = out_dir / name
            path.write_text(line_chart(
                title, [str(s) for s in sizes], series, label,
                y_range=(0.0, 1.0),
            ))
            paths.append(path)
    return paths
