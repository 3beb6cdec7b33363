"""
Profile pools and team similarity classes
=========================================

Experiments draw teams from a pool of 25 random member profiles (opponents
are the same profiles with valuations reversed). Team dissimilarity is the
mean absolute utility difference over shared random offers, averaged over
member pairs; teams beyond 1.5 standard deviations from the mean are
classed very similar / very dissimilar.
"""

import numpy as np

from negoteam import (
    TeamClass,
    classify_and_sample_teams,
    generate_pool,
    group_booking_domain,
    pair_dissimilarity,
    team_dissimilarity,
)

domain = group_booking_domain()
rng = np.random.default_rng(3)
pool = generate_pool(domain, rng)

a, b = pool.member_profiles[0], pool.member_profiles[1]
print("dissimilarity of two pool members:",
      round(pair_dissimilarity(a, b, np.random.default_rng(1)), 4))
print("vs its valuation-reversed opponent:",
      round(pair_dissimilarity(a, pool.opponent_profiles[0],
                               np.random.default_rng(1)), 4))

similar, stats = classify_and_sample_teams(
    pool, team_size=4, team_class=TeamClass.VERY_SIMILAR,
    rng=np.random.default_rng(5), count=10,
)
dissimilar, _ = classify_and_sample_teams(
    pool, team_size=4, team_class=TeamClass.VERY_DISSIMILAR,
    rng=np.random.default_rng(5), count=10,
)
print(f"\npool team dissimilarity: mean {stats.mean:.4f}, sd {stats.stddev:.4f}")
print(f"very similar threshold    <= {stats.threshold_similar:.4f}")
print(f"very dissimilar threshold >= {stats.threshold_dissimilar:.4f}")

for label, teams in (("similar", similar), ("dissimilar", dissimilar)):
    measured = [
        team_dissimilarity([pool.member_profiles[i] for i in team],
                           np.random.default_rng(9))
        for team in teams[:3]
    ]
    print(f"three very {label} teams: {teams[:3]} -> "
          f"{[round(d, 4) for d in measured]}")
