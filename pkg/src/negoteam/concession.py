"""Time-dependent concession: aspiration levels and environment classes.

The aspiration an agent demands at round t decays from its maximum toward
the reservation utility as the deadline approaches:

    s(t) = (1 - eps) - (1 - eps - RU) * (t / T) ** (1 / beta)

``eps`` is the decision-rights handover budget and is zero except for
mediated full-unanimity members; beta < 1 concedes late (boulware) and
beta > 1 concedes early (conceder).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


@dataclass(frozen=True)
class ConcessionParams:
    """Parameters of one agent's concession tactic."""

    reservation: float
    deadline: int
    beta: float
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.reservation <= 1.0:
            raise ValueError(f"reservation must be in [0,1], got {self.reservation}")
        if self.deadline < 1:
            raise ValueError(f"deadline must be >= 1, got {self.deadline}")
        if self.beta <= 0.0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0,1], got {self.epsilon}")
        if 1.0 - self.epsilon < self.reservation:
            raise ValueError(
                f"aspiration range empty: 1 - epsilon ({1.0 - self.epsilon}) "
                f"< reservation ({self.reservation})"
            )


def aspiration(params: ConcessionParams, t: int) -> float:
    """Utility demanded at round t; s(0) = 1 - eps and s(T) = RU."""
    if not 0 <= t <= params.deadline:
        raise ValueError(f"round {t} outside [0, {params.deadline}]")
    top = 1.0 - params.epsilon
    return top - (top - params.reservation) * (t / params.deadline) ** (
        1.0 / params.beta
    )


class BetaClass(str, Enum):
    """Concession speed classes, very boulware through very conceder."""

    VB = "VB"
    B = "B"
    C = "C"
    VC = "VC"


class DeadlineClass(str, Enum):
    """Deadline length classes: short, medium, long."""

    S = "S"
    M = "M"
    L = "L"


_BETA_RANGES: dict[BetaClass, tuple[float, float]] = {
    BetaClass.VB: (0.1, 0.49),
    BetaClass.B: (0.5, 0.99),
    BetaClass.C: (1.0, 10.0),
    BetaClass.VC: (11.0, 40.0),
}

_DEADLINE_RANGES: dict[DeadlineClass, tuple[int, int]] = {
    DeadlineClass.S: (5, 10),
    DeadlineClass.M: (11, 29),
    DeadlineClass.L: (30, 60),
}


def sample_beta(beta_class: BetaClass, rng: np.random.Generator) -> float:
    lo, hi = _BETA_RANGES[BetaClass(beta_class)]
    return float(rng.uniform(lo, hi))


def sample_deadline(deadline_class: DeadlineClass, rng: np.random.Generator) -> int:
    lo, hi = _DEADLINE_RANGES[DeadlineClass(deadline_class)]
    return int(rng.integers(lo, hi + 1))
