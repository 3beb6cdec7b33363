"""The four intra-team strategies and the alternating-offers loop.

Strategies differ in how the team assembles the offer it sends and in the
quorum needed to accept the opponent's counter:

* RE  — a randomly chosen representative negotiates alone.
* SSV — members propose, plurality picks the offer, majority accepts.
* SBV — like SSV with Borda scoring; acceptance needs unanimity.
* FUM — a mediator builds each offer attribute by attribute along a
  learned agenda so every member's aspiration is met; unanimous
  acceptance.

One round is one team offer plus the opponent's response. The team opens
at t = 0 and withdraws once t exceeds its deadline; the opponent withdraws
at its own deadline before anything else. A negotiation is a pure function
of its config (seed included), so traces replay bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from .agents import (
    MemberState,
    OpponentState,
    ResponseKind,
    member_accept_opponent,
    member_partial_accept,
    member_propose,
    member_value_bid,
    member_vote_binary,
    member_vote_borda,
    opponent_respond,
    partial_utility,
)
from .concession import aspiration
from .domain import Domain, Offer, evaluate, ideal_offer, reverse_profile
from .isosearch import iso_offer


class Strategy(str, Enum):
    RE = "RE"
    SSV = "SSV"
    SBV = "SBV"
    FUM = "FUM"


class NegotiationStatus(str, Enum):
    AGREEMENT_OPPONENT_ACCEPT = "agreement_opponent_accept"
    AGREEMENT_TEAM_ACCEPT = "agreement_team_accept"
    FAILURE_TEAM_DEADLINE = "failure_team_deadline"
    FAILURE_OPPONENT_WITHDRAW = "failure_opponent_withdraw"


AGREEMENT_STATUSES = frozenset(
    {
        NegotiationStatus.AGREEMENT_OPPONENT_ACCEPT,
        NegotiationStatus.AGREEMENT_TEAM_ACCEPT,
    }
)


@dataclass(frozen=True)
class NegotiationConfig:
    domain: Domain
    team: tuple[MemberState, ...]
    opponent: OpponentState
    strategy: Strategy
    team_deadline: int
    team_beta: float
    seed: int

    def __post_init__(self) -> None:
        team = tuple(self.team)
        object.__setattr__(self, "team", team)
        if len(team) < 1:
            raise ValueError("team must have at least one member")
        for m in team:
            if m.params.deadline != self.team_deadline:
                raise ValueError(f"member {m.id} deadline differs from team deadline")
            if m.params.beta != self.team_beta:
                raise ValueError(f"member {m.id} beta differs from team beta")


@dataclass(frozen=True)
class NegotiationOutcome:
    status: NegotiationStatus
    agreement: Offer | None
    rounds: int
    member_utilities: tuple[float, ...]
    opponent_utility: float
    trace: tuple[dict[str, Any], ...]

    @property
    def success(self) -> bool:
        return self.status in AGREEMENT_STATUSES


@dataclass(frozen=True)
class Agenda:
    """Attribute order for offer building, least opponent-relevant first."""

    order: tuple[int, ...]
    concession_totals: np.ndarray

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError(f"agenda {self.order} is not a permutation")


# ---------------------------------------------------------------------------
# Team-side building blocks
# ---------------------------------------------------------------------------


def re_build_offer(
    representative: MemberState, t: int, last_opponent_offer: Offer | None
) -> Offer:
    """Representative's aspiration-exact offer, similar to the last counter."""
    if last_opponent_offer is None:
        last_opponent_offer = ideal_offer(reverse_profile(representative.profile))
    return iso_offer(
        representative.profile,
        aspiration(representative.params, t),
        last_opponent_offer,
    )


def _argmax_ties(sums: list[float | int]) -> list[int]:
    best = max(sums)
    return [j for j, s in enumerate(sums) if s == best]


def ssv_select(
    proposals: list[Offer], votes: list[list[int]], rng: np.random.Generator
) -> tuple[Offer, int]:
    """Plurality winner; ties resolved uniformly at random.

    ``votes[i][j]`` is member i's binary vote on proposal j. Returns the
    winning offer and its index.
    """
    if not proposals or any(len(v) != len(proposals) for v in votes):
        raise ValueError("need one vote per member per proposal")
    sums = [sum(v[j] for v in votes) for j in range(len(proposals))]
    ties = _argmax_ties(sums)
    pick = ties[0] if len(ties) == 1 else int(ties[rng.integers(len(ties))])
    return proposals[pick], pick


def ssv_accept(votes: list[int], rng: np.random.Generator) -> bool:
    """Majority acceptance; an exact tie falls to a fair coin."""
    total = sum(votes)
    half = len(votes) / 2.0
    if total > half:
        return True
    if total < half:
        return False
    return bool(rng.random() < 0.5)


def sbv_select(
    proposals: list[Offer], scores: list[list[int]], rng: np.random.Generator
) -> tuple[Offer, int]:
    """Highest summed Borda score; ties resolved uniformly at random."""
    if not proposals or any(len(s) != len(proposals) for s in scores):
        raise ValueError("need one score per member per proposal")
    sums = [sum(s[j] for s in scores) for j in range(len(proposals))]
    ties = _argmax_ties(sums)
    pick = ties[0] if len(ties) == 1 else int(ties[rng.integers(len(ties))])
    return proposals[pick], pick


def unanimity_accept(votes: list[int]) -> bool:
    return sum(votes) == len(votes)


def build_agenda(
    observed_offers: list[Offer],
    opponent_best: Offer,
    k: int,
    rng: np.random.Generator | None = None,
) -> Agenda:
    """Order attributes by total observed opponent concession, descending.

    Uses the first min(len(observed), k) counters; per attribute the
    concession is the absolute normalized distance from the opponent's
    best value. Ties fall back to ascending attribute index. With nothing
    observed yet the agenda is a seeded random permutation.
    """
    n = opponent_best.size
    used = observed_offers[: min(len(observed_offers), k)]
    if not used:
        if rng is None:
            raise ValueError("rng required when no offers have been observed")
        order = tuple(int(j) for j in rng.permutation(n))
        return Agenda(order=order, concession_totals=np.zeros(n))
    totals = np.abs(np.stack(used) - opponent_best).sum(axis=0)
    order = tuple(int(j) for j in np.lexsort((np.arange(n), -totals)))
    return Agenda(order=order, concession_totals=totals)


def fum_build_offer(
    team: tuple[MemberState, ...], agenda: Agenda, t: int
) -> Offer:
    offer, _ = _fum_build_logged(team, agenda, t)
    return offer


def _fum_build_logged(
    team: tuple[MemberState, ...], agenda: Agenda, t: int
) -> tuple[Offer, dict[int, float]]:
    """Mediated attribute-by-attribute build.

    Attributes nobody cares about go to the opponent's best value; the
    rest are filled along the agenda with the most demanding bid among
    active interested members (max where the team's valuation increases,
    min where it decreases). Members drop out as soon as the partial offer
    meets their aspiration, and leftover attributes again favor the
    opponent. Returns the offer plus each member's zero-filled utility at
    deactivation, for auditing the monotone-deactivation property.
    """
    n = len(agenda.order)
    increasing = team[0].profile.increasing
    opponent_best = np.where(increasing, 0.0, 1.0)
    partial = np.full(n, np.nan)

    common = frozenset.intersection(*[m.ni_set for m in team])
    for j in sorted(common):
        partial[j] = opponent_best[j]

    active = list(range(len(team)))
    deactivation_utility: dict[int, float] = {}
    for j in agenda.order:
        if not active:
            break
        if not np.isnan(partial[j]):
            continue
        bids = [
            member_value_bid(team[i], j, partial, t)
            for i in active
            if j not in team[i].ni_set
        ]
        if not bids:
            continue
        partial[j] = max(bids) if increasing[j] else min(bids)
        remaining = []
        for i in active:
            if member_partial_accept(team[i], partial, t):
                deactivation_utility[i] = partial_utility(team[i].profile, partial)
            else:
                remaining.append(i)
        active = remaining

    unset = np.isnan(partial)
    partial[unset] = opponent_best[unset]
    return partial, deactivation_utility


def strategy_accept(
    strategy: Strategy,
    team: tuple[MemberState, ...],
    opponent_offer: Offer,
    t: int,
    rng: np.random.Generator,
    representative: int | None = None,
) -> tuple[bool, list[int]]:
    """Team's acceptance decision and the underlying member votes."""
    votes = [member_accept_opponent(m, opponent_offer, t) for m in team]
    if strategy is Strategy.RE:
        if representative is None:
            raise ValueError("RE needs a representative index")
        return bool(votes[representative]), votes
    if strategy is Strategy.SSV:
        return ssv_accept(votes, rng), votes
    return unanimity_accept(votes), votes


# ---------------------------------------------------------------------------
# Protocol loop
# ---------------------------------------------------------------------------


def run_negotiation(config: NegotiationConfig) -> NegotiationOutcome:
    """Run one complete negotiation; same config (and seed) replays exactly."""
    rng = np.random.default_rng(config.seed)
    team = config.team
    strategy = config.strategy
    deadline = config.team_deadline
    trace: list[dict[str, Any]] = []

    representative: int | None = None
    if strategy is Strategy.RE:
        representative = int(rng.integers(len(team)))
        trace.append(
            {"round": 0, "actor": "mediator", "kind": "pick_representative",
             "member": team[representative].id}
        )

    agenda_window = deadline // 4
    observed: list[Offer] = []
    last_opponent_offer: Offer | None = None
    last_team_offer: Offer | None = None

    status: NegotiationStatus | None = None
    agreement: Offer | None = None
    rounds = 0

    t = 0
    while t <= deadline:
        offer = _team_offer(
            config, t, rng, representative, agenda_window, observed,
            last_opponent_offer, last_team_offer, trace,
        )
        rounds = t + 1

        response = opponent_respond(config.opponent, offer, t)
        if response.kind is ResponseKind.WITHDRAW:
            trace.append({"round": t, "actor": "opponent", "kind": "withdraw"})
            status = NegotiationStatus.FAILURE_OPPONENT_WITHDRAW
            break
        if response.kind is ResponseKind.ACCEPT:
            trace.append({"round": t, "actor": "opponent", "kind": "accept"})
            status = NegotiationStatus.AGREEMENT_OPPONENT_ACCEPT
            agreement = offer
            break

        counter = response.offer
        observed.append(counter)
        trace.append(
            {"round": t, "actor": "opponent", "kind": "counter",
             "offer": counter.tolist()}
        )

        # At t = deadline there is no next-round aspiration left to compare
        # against: the team is about to withdraw and cannot accept.
        if t + 1 <= deadline:
            decision, votes = strategy_accept(
                strategy, team, counter, t, rng, representative
            )
            trace.append(
                {"round": t, "actor": "team", "kind": "accept_vote",
                 "votes": votes, "decision": decision}
            )
            if decision:
                status = NegotiationStatus.AGREEMENT_TEAM_ACCEPT
                agreement = counter
                break

        last_opponent_offer = counter
        last_team_offer = offer
        t += 1

    if status is None:
        status = NegotiationStatus.FAILURE_TEAM_DEADLINE
        trace.append({"round": deadline, "actor": "team", "kind": "withdraw"})

    if agreement is not None:
        member_utilities = tuple(evaluate(m.profile, agreement) for m in team)
        opponent_utility = evaluate(config.opponent.profile, agreement)
    else:
        member_utilities = tuple(0.0 for _ in team)
        opponent_utility = 0.0

    return NegotiationOutcome(
        status=status,
        agreement=agreement,
        rounds=rounds,
        member_utilities=member_utilities,
        opponent_utility=opponent_utility,
        trace=tuple(trace),
    )


def _team_offer(
    config: NegotiationConfig,
    t: int,
    rng: np.random.Generator,
    representative: int | None,
    agenda_window: int,
    observed: list[Offer],
    last_opponent_offer: Offer | None,
    last_team_offer: Offer | None,
    trace: list[dict[str, Any]],
) -> Offer:
    team = config.team
    strategy = config.strategy

    if strategy is Strategy.RE:
        offer = re_build_offer(team[representative], t, last_opponent_offer)
        trace.append(
            {"round": t, "actor": "team", "kind": "propose",
             "offer": offer.tolist()}
        )
        return offer

    if strategy in (Strategy.SSV, Strategy.SBV):
        proposals = [
            member_propose(m, t, last_opponent_offer, last_team_offer)
            for m in team
        ]
        if strategy is Strategy.SSV:
            votes = [member_vote_binary(m, proposals, t) for m in team]
            offer, pick = ssv_select(proposals, votes, rng)
        else:
            votes = [member_vote_borda(m, proposals) for m in team]
            offer, pick = sbv_select(proposals, votes, rng)
        trace.append(
            {"round": t, "actor": "team", "kind": "propose",
             "offer": offer.tolist(), "selected": pick,
             "proposals": [p.tolist() for p in proposals], "votes": votes}
        )
        return offer

    agenda = build_agenda(
        observed, _opponent_best(team), agenda_window, rng
    )
    offer = fum_build_offer(team, agenda, t)
    trace.append(
        {"round": t, "actor": "team", "kind": "propose",
         "offer": offer.tolist(), "agenda": list(agenda.order)}
    )
    return offer


def _opponent_best(team: tuple[MemberState, ...]) -> Offer:
    return np.where(team[0].profile.increasing, 0.0, 1.0)


# ---------------------------------------------------------------------------
# Trace serialization (line-delimited JSON)
# ---------------------------------------------------------------------------


def trace_to_jsonl(trace: tuple[dict[str, Any], ...]) -> str:
    return "\n".join(
        json.dumps(event, sort_keys=True, separators=(",", ":")) for event in trace
    )
