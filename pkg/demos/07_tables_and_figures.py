"""
Tables and figures from a results CSV
=====================================

The separate ``negoreport`` package (under ``analysis/``) consumes only
the results CSV: it re-derives means and Welch tests itself and renders
markdown tables with the best-equivalent set bolded, plus SVG line charts
with markers on uniquely-best configurations.

Run ``pip install -e analysis/`` first.
"""

import tempfile
from pathlib import Path

import numpy as np

from negoteam import (
    BetaClass,
    DeadlineClass,
    ExperimentCell,
    Strategy,
    TeamClass,
    generate_pool,
    group_booking_domain,
    run_grid,
    write_rows_csv,
)
from negoreport import ReportSpec, render_figure, render_table

domain = group_booking_domain()
pool = generate_pool(domain, np.random.default_rng(2024))

cells = [
    ExperimentCell(TeamClass.VERY_SIMILAR, DeadlineClass.S, DeadlineClass.S,
                   4, strategy, BetaClass.B, opp_beta, repetitions=1)
    for strategy in Strategy
    for opp_beta in BetaClass
]

out = Path(tempfile.mkdtemp(prefix="negoteam_demo_"))
results = out / "results.csv"
write_rows_csv(
    run_grid(cells, domain, pool, master_seed=23, teams_per_class=5, jobs=2),
    results,
)

table = render_table(ReportSpec(results, "table3", out))
print(f"wrote {table}:")
print(table.read_text()[:600], "...")

figures = render_figure(ReportSpec(results, "fig_long_team", out))
print("\nwrote figures:")
for path in figures:
    print(" ", path)
