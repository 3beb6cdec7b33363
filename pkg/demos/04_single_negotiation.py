"""
One negotiation, four team strategies
=====================================

A team of four books a hotel against a conceding opponent under each
intra-team strategy. The representative (RE) ignores teammates; plurality
voting (SSV) needs a majority to accept; Borda voting (SBV) and the
mediated build (FUM) accept only unanimously, and FUM assembles every
offer attribute by attribute so each member's aspiration is met.
"""

import numpy as np

from negoteam import (
    ConcessionParams,
    MemberState,
    NegotiationConfig,
    OpponentState,
    Strategy,
    generate_pool,
    group_booking_domain,
    handover_set,
    run_negotiation,
    trace_to_jsonl,
)

domain = group_booking_domain()
pool = generate_pool(domain, np.random.default_rng(12))

TEAM_DEADLINE, TEAM_BETA = 14, 0.8
OPP_DEADLINE, OPP_BETA = 16, 0.9

team = []
for i, reservation in enumerate([0.08, 0.15, 0.11, 0.2]):
    profile = pool.member_profiles[i].with_reservation(reservation)
    params = ConcessionParams(reservation, TEAM_DEADLINE, TEAM_BETA)
    team.append(MemberState(i, profile, params, handover_set(profile, 0.0)))

opponent = OpponentState(
    pool.opponent_profiles[7].with_reservation(0.1),
    ConcessionParams(0.1, OPP_DEADLINE, OPP_BETA),
)

for strategy in Strategy:
    config = NegotiationConfig(domain, tuple(team), opponent, strategy,
                               TEAM_DEADLINE, TEAM_BETA, seed=99)
    outcome = run_negotiation(config)
    utilities = [round(u, 3) for u in outcome.member_utilities]
    print(f"{strategy.value}: {outcome.status.value} in {outcome.rounds} rounds, "
          f"member utilities {utilities}, opponent {outcome.opponent_utility:.3f}")

# the full message trace of the last negotiation, replayable line by line
print("\nlast trace (first 6 events):")
for line in trace_to_jsonl(outcome.trace).splitlines()[:6]:
    print(" ", line)
