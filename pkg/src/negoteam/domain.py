"""Negotiation domains, offers, and linear additive utility profiles.

A domain is an ordered list of real-valued attributes. Internally every
offer lives on the normalized cube [0, 1]^n; natural units appear only at
I/O boundaries (scenario files, reporting). Utilities are linear additive
with monotone per-attribute valuations: V(x) = x for increasing attributes
and V(x) = 1 - x for decreasing ones, so every utility is in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .sections import read_sections, write_sections

WEIGHT_TOL = 1e-9

# An offer is a float vector on [0, 1]^n; plain numpy arrays keep the hot
# paths cheap, validation happens at the public entry points.
Offer = np.ndarray


class Orientation(str, Enum):
    """Direction of the team members' valuation on the normalized domain."""

    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass(frozen=True)
class AttributeSpec:
    """One negotiable attribute in natural units."""

    name: str
    min: float
    max: float
    team_orientation: Orientation

    def __post_init__(self) -> None:
        if not self.min < self.max:
            raise ValueError(
                f"attribute {self.name!r}: min ({self.min}) must be < max ({self.max})"
            )
        if not isinstance(self.team_orientation, Orientation):
            object.__setattr__(
                self, "team_orientation", Orientation(self.team_orientation)
            )


@dataclass(frozen=True)
class Domain:
    """An ordered collection of attributes defining the offer space."""

    attributes: tuple[AttributeSpec, ...]

    def __post_init__(self) -> None:
        attrs = tuple(self.attributes)
        object.__setattr__(self, "attributes", attrs)
        if len(attrs) < 1:
            raise ValueError("domain needs at least one attribute")
        names = [a.name for a in attrs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate attribute names: {names}")

    @property
    def size(self) -> int:
        return len(self.attributes)

    def team_increasing(self) -> np.ndarray:
        """Boolean mask: True where the team's valuation is increasing."""
        return np.array(
            [a.team_orientation is Orientation.INCREASING for a in self.attributes]
        )


@dataclass(frozen=True, eq=False)
class UtilityProfile:
    """Linear additive utility: weights, valuation directions, reservation.

    ``increasing[j]`` selects V(x) = x for attribute j, otherwise
    V(x) = 1 - x. Weights are nonnegative and sum to one; ``reservation``
    is the utility of walking away without a deal.
    """

    weights: np.ndarray
    increasing: np.ndarray
    reservation: float = 0.0

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        inc = np.asarray(self.increasing, dtype=bool)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "increasing", inc)
        if w.ndim != 1 or inc.shape != w.shape:
            raise ValueError("weights and increasing must be 1-d and equal length")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        if not 0.0 <= self.reservation <= 1.0:
            raise ValueError(f"reservation must be in [0,1], got {self.reservation}")
        w.setflags(write=False)
        inc.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def with_reservation(self, reservation: float) -> "UtilityProfile":
        return replace(self, reservation=reservation)


def _check_dims(n: int, offer: Offer) -> np.ndarray:
    x = np.asarray(offer, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"offer has shape {x.shape}, expected ({n},)")
    return x


def valuations(profile: UtilityProfile, offer: Offer) -> np.ndarray:
    """Per-attribute valuations V_j(x_j) in [0, 1]."""
    x = _check_dims(profile.size, offer)
    return np.where(profile.increasing, x, 1.0 - x)


def evaluate(profile: UtilityProfile, offer: Offer) -> float:
    """Utility of a complete offer: sum_j w_j * V_j(x_j)."""
    return float(profile.weights @ valuations(profile, offer))


def normalize(domain: Domain, natural_values: Sequence[float]) -> Offer:
    """Map natural attribute values onto the normalized cube.

    Raises ValueError when a value falls outside its attribute range.
    """
    vals = np.asarray(natural_values, dtype=float)
    if vals.shape != (domain.size,):
        raise ValueError(f"expected {domain.size} values, got shape {vals.shape}")
    lo = np.array([a.min for a in domain.attributes])
    hi = np.array([a.max for a in domain.attributes])
    if np.any(vals < lo) or np.any(vals > hi):
        bad = [
            a.name
            for a, v in zip(domain.attributes, vals)
            if not (a.min <= v <= a.max)
        ]
        raise ValueError(f"values out of range for attributes: {bad}")
    return (vals - lo) / (hi - lo)


def denormalize(domain: Domain, offer: Offer) -> np.ndarray:
    """Inverse of :func:`normalize`; exact round-trip up to float rounding."""
    x = _check_dims(domain.size, offer)
    lo = np.array([a.min for a in domain.attributes])
    hi = np.array([a.max for a in domain.attributes])
    return lo + x * (hi - lo)


def ideal_offer(profile: UtilityProfile) -> Offer:
    """The unique offer with utility 1: each attribute at its best value."""
    return np.where(profile.increasing, 1.0, 0.0)


def reverse_profile(
    profile: UtilityProfile, reservation: float | None = None
) -> UtilityProfile:
    """Same weights with every valuation direction flipped.

    Used to derive opponent-side preferences from a team-side profile; the
    reversal is an involution. ``reservation`` defaults to the source
    profile's value.
    """
    return UtilityProfile(
        weights=profile.weights,
        increasing=~profile.increasing,
        reservation=profile.reservation if reservation is None else reservation,
    )


def team_profile(
    domain: Domain, weights: Sequence[float], reservation: float = 0.0
) -> UtilityProfile:
    """Build a team-member profile using the domain's shared orientations."""
    return UtilityProfile(
        weights=np.asarray(weights, dtype=float),
        increasing=domain.team_increasing(),
        reservation=reservation,
    )


def opponent_best_values(domain: Domain) -> Offer:
    """The offer the opponent likes best: worst corner for the team.

    The opponent's valuation direction is the reversal of the team's, so
    its preferred value per attribute is 0 where the team's valuation
    increases and 1 where it decreases.
    """
    return np.where(domain.team_increasing(), 0.0, 1.0)


def group_booking_domain() -> Domain:
    """Default four-attribute hotel group-booking scenario.

    Price per person and cancellation fee hurt the team as they grow;
    payment deadline and bar discount help.
    """
    return Domain(
        attributes=(
            AttributeSpec("price_per_person", 210.0, 700.0, Orientation.DECREASING),
            AttributeSpec("cancellation_fee", 0.0, 150.0, Orientation.DECREASING),
            AttributeSpec("payment_deadline", 0.0, 30.0, Orientation.INCREASING),
            AttributeSpec("bar_discount", 0.0, 20.0, Orientation.INCREASING),
        )
    )


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------
#
# A scenario file is a sectioned key-value document with one [attribute]
# section per attribute:
#
#     [attribute]
#     name = price_per_person
#     min = 210
#     max = 700
#     team_orientation = decreasing


def scenario_to_text(domain: Domain) -> str:
    sections = [
        (
            "attribute",
            {
                "name": a.name,
                "min": repr(a.min),
                "max": repr(a.max),
                "team_orientation": a.team_orientation.value,
            },
        )
        for a in domain.attributes
    ]
    return write_sections(sections)


def scenario_from_text(text: str) -> Domain:
    attrs = []
    for header, fields in read_sections(text):
        if header != "attribute":
            raise ValueError(f"unexpected section [{header}] in scenario file")
        try:
            orientation = Orientation(fields["team_orientation"])
        except ValueError:
            raise ValueError(
                f"unknown team_orientation {fields['team_orientation']!r}"
            ) from None
        except KeyError:
            raise ValueError("attribute section missing team_orientation") from None
        attrs.append(
            AttributeSpec(
                name=fields["name"],
                min=float(fields["min"]),
                max=float(fields["max"]),
                team_orientation=orientation,
            )
        )
    return Domain(attributes=tuple(attrs))


def save_scenario(domain: Domain, path: str | Path) -> None:
    Path(path).write_text(scenario_to_text(domain))


def load_scenario(path: str | Path) -> Domain:
    return scenario_from_text(Path(path).read_text())
