"""
Iso-utility offer search
========================

All offers with the same utility for an agent form an iso-utility set.
When many offers are equally good for you, pick the one the other side is
most likely to take: the most similar to their last offer (single
reference), or — when proposing inside a team — similar both to the
opponent's last offer and to the team's last offer (two references,
product of similarities).
"""

import numpy as np

from negoteam import evaluate, group_booking_domain, iso_offer, iso_offer_dual, similarity, team_profile

domain = group_booking_domain()
member = team_profile(domain, weights=[0.4, 0.3, 0.2, 0.1])

opponent_last = np.array([1.0, 0.9, 0.1, 0.0])  # roughly the hotel's corner
team_last = np.array([0.2, 0.1, 0.9, 0.8])      # roughly the team's corner

for target in (0.9, 0.7, 0.5):
    single = iso_offer(member, target, opponent_last)
    dual = iso_offer_dual(member, target, opponent_last, team_last)
    print(f"target utility {target}:")
    print(f"  single-ref offer {np.round(single, 3)}  "
          f"U={evaluate(member, single):.6f}  "
          f"sim-to-opponent={similarity(single, opponent_last):.3f}")
    print(f"  dual-ref offer   {np.round(dual, 3)}  "
          f"U={evaluate(member, dual):.6f}  "
          f"product={similarity(dual, opponent_last) * similarity(dual, team_last):.3f}")

# lowering the demanded utility moves offers toward the opponent's corner
# while the utility constraint is always met exactly
