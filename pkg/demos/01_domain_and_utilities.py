"""
Domains, offers, and utility profiles
=====================================

The hotel group-booking scenario: four real-valued attributes, each scaled
to [0, 1]. Team members value price and cancellation fee downward, payment
deadline and bar discount upward; the hotel values every attribute the
opposite way.
"""

import numpy as np

from negoteam import (
    denormalize,
    evaluate,
    group_booking_domain,
    ideal_offer,
    normalize,
    reverse_profile,
    team_profile,
)

domain = group_booking_domain()
print("attributes:")
for a in domain.attributes:
    print(f"  {a.name}: [{a.min}, {a.max}] team {a.team_orientation.value}")

# a member who cares mostly about price, a little about everything else
member = team_profile(domain, weights=[0.55, 0.15, 0.15, 0.15], reservation=0.1)
# the hotel uses the same weights here but reversed valuations
hotel = reverse_profile(member, reservation=0.12)

# a concrete deal in natural units: $400 per person, $50 cancellation fee,
# full payment 10 days in, 5% bar discount
deal = normalize(domain, [400.0, 50.0, 10.0, 5.0])
print("\nnormalized deal:", np.round(deal, 3))
print("member utility:", round(evaluate(member, deal), 4))
print("hotel utility: ", round(evaluate(hotel, deal), 4))

# the two ideals sit at opposite corners
print("\nmember ideal (natural units):", denormalize(domain, ideal_offer(member)))
print("hotel ideal  (natural units):", denormalize(domain, ideal_offer(hotel)))
