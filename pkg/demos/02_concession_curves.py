"""
Time-dependent concession
=========================

The aspiration an agent demands decays from 1 toward its reservation
utility as its deadline approaches. The speed is set by beta: below 1 the
agent holds out (boulware), above 1 it concedes early (conceder).
"""

import numpy as np

from negoteam import BetaClass, ConcessionParams, aspiration, sample_beta

DEADLINE = 20
RESERVATION = 0.15

rng = np.random.default_rng(0)
curves = {}
for klass in BetaClass:
    beta = sample_beta(klass, rng)
    params = ConcessionParams(RESERVATION, DEADLINE, beta)
    curves[klass.value] = (beta, [aspiration(params, t) for t in range(DEADLINE + 1)])

header = "t    " + "  ".join(f"{k:>6}" for k in curves)
print(header)
print("-" * len(header))
for t in range(0, DEADLINE + 1, 2):
    row = f"{t:<4} " + "  ".join(f"{curves[k][1][t]:6.3f}" for k in curves)
    print(row)
print("\nsampled betas:", {k: round(v[0], 3) for k, v in curves.items()})
print("every curve starts at 1 and ends exactly at the reservation utility.")
