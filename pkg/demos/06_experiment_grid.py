"""
A small experiment grid, end to end
===================================

Every negotiation of a grid is seeded from (master seed, cell, team,
opponent, repetition), so reruns — sequential or parallel — reproduce the
results CSV byte for byte. This demo runs a reduced short-deadline grid
and prints the per-configuration summary with best-equivalence flags.
"""

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
    summaries_to_tables,
    summarize,
)
from negoteam.experiment import rows_to_csv_text

domain = group_booking_domain()
pool = generate_pool(domain, np.random.default_rng(2024))

cells = [
    ExperimentCell(
        similarity=TeamClass.VERY_DISSIMILAR,
        team_deadline=DeadlineClass.S,
        opp_deadline=DeadlineClass.S,
        team_size=4,
        strategy=strategy,
        team_beta=BetaClass.B,
        opp_beta=BetaClass.C,
        repetitions=2,
    )
    for strategy in Strategy
]

rows = run_grid(cells, domain, pool, master_seed=17, teams_per_class=10, jobs=2)
print(f"{len(rows)} negotiations "
      f"({len(cells)} cells x 10 teams x 12 opponents x 2 repetitions)")

again = run_grid(cells, domain, pool, master_seed=17, teams_per_class=10, jobs=1)
print("rerun byte-identical:", rows_to_csv_text(rows) == rows_to_csv_text(again))

print()
print(summaries_to_tables(summarize(rows)))
