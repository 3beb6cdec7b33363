"""Decision rules for the opponent and for individual team members.

Partial offers (used while the mediated full-unanimity strategy assembles
an offer attribute by attribute) are arrays with NaN marking unset
attributes; unset attributes contribute zero valuation, the conservative
lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .concession import ConcessionParams, aspiration
from .domain import Offer, UtilityProfile, evaluate, ideal_offer, reverse_profile
from .isosearch import iso_offer, iso_offer_dual

# Floating-point guard: a member must always endorse an offer sitting
# exactly at its own aspiration (its own proposals do, up to rounding).
_ASPIRATION_EPS = 1e-9


class ResponseKind(str, Enum):
    ACCEPT = "accept"
    COUNTER = "counter"
    WITHDRAW = "withdraw"


@dataclass(frozen=True)
class OpponentResponse:
    kind: ResponseKind
    offer: Offer | None = None


@dataclass(frozen=True)
class OpponentState:
    """Immutable opponent: reversed-valuation profile plus tactic params."""

    profile: UtilityProfile
    params: ConcessionParams

    def __post_init__(self) -> None:
        if self.params.epsilon != 0.0:
            raise ValueError("opponent epsilon must be 0")


@dataclass(frozen=True)
class MemberState:
    """Immutable team member: profile, shared-tactic params, handover set."""

    id: int
    profile: UtilityProfile
    params: ConcessionParams
    ni_set: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        handed = float(self.profile.weights[sorted(self.ni_set)].sum())
        if handed > self.params.epsilon + 1e-12:
            raise ValueError(
                f"handover set weight {handed} exceeds epsilon {self.params.epsilon}"
            )


def opponent_respond(
    state: OpponentState, incoming: Offer, t: int
) -> OpponentResponse:
    """Withdraw at the deadline, else accept or counter on the iso-set.

    The deadline check wins over acceptance; acceptance compares the
    incoming offer with the utility the opponent would demand next round,
    and a counter sits exactly at this round's aspiration, as similar as
    possible to the incoming offer.
    """
    if t >= state.params.deadline:
        return OpponentResponse(ResponseKind.WITHDRAW)
    if aspiration(state.params, t + 1) <= evaluate(state.profile, incoming):
        return OpponentResponse(ResponseKind.ACCEPT)
    counter = iso_offer(state.profile, aspiration(state.params, t), incoming)
    return OpponentResponse(ResponseKind.COUNTER, counter)


def member_propose(
    member: MemberState,
    t: int,
    last_opponent_offer: Offer | None = None,
    last_team_offer: Offer | None = None,
) -> Offer:
    """Member's proposal: aspiration-exact, similar to both last offers.

    Before any offers exist the references default to the opponent's
    presumed ideal (the member's reversed-profile ideal) and the member's
    own ideal.
    """
    if last_opponent_offer is None:
        last_opponent_offer = ideal_offer(reverse_profile(member.profile))
    if last_team_offer is None:
        last_team_offer = ideal_offer(member.profile)
    return iso_offer_dual(
        member.profile,
        aspiration(member.params, t),
        last_opponent_offer,
        last_team_offer,
    )


def member_vote_binary(
    member: MemberState, proposals: list[Offer], t: int
) -> list[int]:
    """1 for every proposal meeting the member's aspiration at round t."""
    if not proposals:
        raise ValueError("no proposals to vote on")
    level = aspiration(member.params, t) - _ASPIRATION_EPS
    return [1 if evaluate(member.profile, p) >= level else 0 for p in proposals]


def member_vote_borda(member: MemberState, proposals: list[Offer]) -> list[int]:
    """Scores 0..k-1 by ascending own utility; ties keep index order."""
    if not proposals:
        raise ValueError("no proposals to vote on")
    utilities = np.array([evaluate(member.profile, p) for p in proposals])
    order = np.argsort(utilities, kind="stable")
    scores = np.empty(len(proposals), dtype=int)
    scores[order] = np.arange(len(proposals))
    return scores.tolist()


def member_accept_opponent(member: MemberState, offer: Offer, t: int) -> int:
    """1 iff the offer meets what the member would demand next round."""
    if t + 1 > member.params.deadline:
        raise ValueError(f"no next round: t+1 = {t + 1} past deadline")
    return int(
        evaluate(member.profile, offer) >= aspiration(member.params, t + 1)
    )


def handover_set(profile: UtilityProfile, epsilon: float) -> frozenset[int]:
    """Largest ascending-weight prefix whose total weight fits in epsilon.

    With epsilon = 0 this is exactly the zero-weight attributes.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0,1], got {epsilon}")
    order = np.argsort(profile.weights, kind="stable")
    chosen: list[int] = []
    total = 0.0
    for j in order:
        if total + profile.weights[j] > epsilon:
            break
        total += float(profile.weights[j])
        chosen.append(int(j))
    return frozenset(chosen)


def partial_utility(profile: UtilityProfile, partial: np.ndarray) -> float:
    """Utility of a partial offer; unset (NaN) attributes count as V = 0."""
    v = np.where(profile.increasing, partial, 1.0 - partial)
    return float(profile.weights @ np.where(np.isnan(v), 0.0, v))


def member_value_bid(
    member: MemberState, attr: int, partial: np.ndarray, t: int
) -> float:
    """Attribute value that closes the member's aspiration gap.

    Closed form for linear valuations: the needed valuation is the gap
    divided by the attribute weight, clamped to [0, 1]; an already
    satisfied member (gap <= 0) bids its worst value so the demand never
    overshoots the aspiration.
    """
    if attr in member.ni_set:
        raise ValueError(f"attribute {attr} was handed over by member {member.id}")
    if not np.isnan(partial[attr]):
        raise ValueError(f"attribute {attr} already set")
    gap = aspiration(member.params, t) - partial_utility(member.profile, partial)
    w = float(member.profile.weights[attr])
    if gap <= 0.0 or w <= 0.0:
        needed = 0.0
    else:
        needed = min(gap / w, 1.0)
    return needed if member.profile.increasing[attr] else 1.0 - needed


def member_partial_accept(member: MemberState, partial: np.ndarray, t: int) -> bool:
    """True once the zero-filled partial utility reaches the aspiration."""
    level = aspiration(member.params, t) - _ASPIRATION_EPS
    return partial_utility(member.profile, partial) >= level
