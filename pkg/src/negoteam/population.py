"""Profile pools, team dissimilarity, and team classification.

A pool holds 25 randomly generated member profiles and the 25 opponent
profiles obtained by reversing every valuation direction. Teams are index
subsets of the member pool; they are classed as very similar or very
dissimilar against thresholds 1.5 standard deviations either side of the
mean team dissimilarity, estimated over random subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from pathlib import Path

import numpy as np

from .domain import Domain, UtilityProfile, reverse_profile
from .sections import parse_list, read_sections, write_sections

POOL_SIZE = 25
PAIR_SAMPLES = 1000
STAT_SUBSETS = 10_000
MAX_DRAWS = 1_000_000


class TeamClass(str, Enum):
    VERY_SIMILAR = "very_similar"
    VERY_DISSIMILAR = "very_dissimilar"


@dataclass(frozen=True)
class ProfilePool:
    member_profiles: tuple[UtilityProfile, ...]
    opponent_profiles: tuple[UtilityProfile, ...]

    def __post_init__(self) -> None:
        if len(self.member_profiles) != len(self.opponent_profiles):
            raise ValueError("member and opponent pools must have equal size")


@dataclass(frozen=True)
class TeamClassStats:
    """Dissimilarity statistics used to classify teams."""

    mean: float
    stddev: float

    @property
    def threshold_similar(self) -> float:
        return self.mean - 1.5 * self.stddev

    @property
    def threshold_dissimilar(self) -> float:
        return self.mean + 1.5 * self.stddev


class TeamGenerationError(RuntimeError):
    """Raised when a class cannot yield enough qualifying teams."""


def simplex_weights(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the weight simplex via normalized exponentials."""
    e = rng.exponential(size=n)
    return e / e.sum()


def generate_pool(
    domain: Domain, rng: np.random.Generator, size: int = POOL_SIZE
) -> ProfilePool:
    """Random member profiles plus their valuation-reversed opponents."""
    increasing = domain.team_increasing()
    members = tuple(
        UtilityProfile(weights=simplex_weights(domain.size, rng), increasing=increasing)
        for _ in range(size)
    )
    opponents = tuple(reverse_profile(p) for p in members)
    return ProfilePool(member_profiles=members, opponent_profiles=opponents)


def _utilities_on_samples(
    profiles: tuple[UtilityProfile, ...], samples: np.ndarray
) -> np.ndarray:
    """Utility matrix, one row per profile, one column per sampled offer."""
    rows = []
    for p in profiles:
        v = np.where(p.increasing, samples, 1.0 - samples)
        rows.append(v @ p.weights)
    return np.stack(rows)


def pair_dissimilarity(
    u1: UtilityProfile,
    u2: UtilityProfile,
    rng: np.random.Generator,
    samples: int = PAIR_SAMPLES,
) -> float:
    """Mean absolute utility difference over shared random offers."""
    offers = rng.random((samples, u1.size))
    utils = _utilities_on_samples((u1, u2), offers)
    return float(np.abs(utils[0] - utils[1]).mean())


def team_dissimilarity(
    team: list[UtilityProfile],
    rng: np.random.Generator,
    samples: int = PAIR_SAMPLES,
) -> float:
    """Average pairwise dissimilarity, all pairs on one shared sample set."""
    if len(team) < 2:
        raise ValueError("team dissimilarity needs at least two members")
    offers = rng.random((samples, team[0].size))
    utils = _utilities_on_samples(tuple(team), offers)
    values = [
        float(np.abs(utils[i] - utils[j]).mean())
        for i, j in combinations(range(len(team)), 2)
    ]
    return float(np.mean(values))


def dissimilarity_matrix(
    profiles: tuple[UtilityProfile, ...],
    rng: np.random.Generator,
    samples: int = PAIR_SAMPLES,
) -> np.ndarray:
    """All-pairs dissimilarity over one shared sample set."""
    offers = rng.random((samples, profiles[0].size))
    utils = _utilities_on_samples(profiles, offers)
    diff = np.abs(utils[:, None, :] - utils[None, :, :])
    return diff.mean(axis=2)


def _subset_dissimilarity(matrix: np.ndarray, idx: np.ndarray) -> float:
    sub = matrix[np.ix_(idx, idx)]
    m = idx.size
    return float(sub.sum() / (m * (m - 1)))


def estimate_team_stats(
    matrix: np.ndarray,
    team_size: int,
    rng: np.random.Generator,
    subsets: int = STAT_SUBSETS,
) -> TeamClassStats:
    """Mean and stddev of team dissimilarity over random pool subsets."""
    pool = matrix.shape[0]
    values = np.empty(subsets)
    for i in range(subsets):
        idx = rng.choice(pool, size=team_size, replace=False)
        values[i] = _subset_dissimilarity(matrix, idx)
    return TeamClassStats(mean=float(values.mean()), stddev=float(values.std()))


def classify_and_sample_teams(
    pool: ProfilePool,
    team_size: int,
    team_class: TeamClass,
    rng: np.random.Generator,
    count: int = 100,
    samples: int = PAIR_SAMPLES,
    subsets: int = STAT_SUBSETS,
    max_draws: int = MAX_DRAWS,
) -> tuple[list[tuple[int, ...]], TeamClassStats]:
    """Draw distinct qualifying teams for one similarity class.

    Teams are index tuples into the member pool. Dissimilarities come from
    a pool-wide matrix on one shared sample set; thresholds sit 1.5 sigma
    from the subset mean. Raises TeamGenerationError when the attempt
    budget runs out before ``count`` qualifying teams appear.
    """
    team_class = TeamClass(team_class)
    matrix = dissimilarity_matrix(pool.member_profiles, rng, samples)
    stats = estimate_team_stats(matrix, team_size, rng, subsets)

    teams: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    pool_n = len(pool.member_profiles)
    for _ in range(max_draws):
        if len(teams) >= count:
            break
        idx = np.sort(rng.choice(pool_n, size=team_size, replace=False))
        key = tuple(int(i) for i in idx)
        if key in seen:
            continue
        value = _subset_dissimilarity(matrix, idx)
        if team_class is TeamClass.VERY_SIMILAR:
            qualifies = value <= stats.threshold_similar
        else:
            qualifies = value >= stats.threshold_dissimilar
        if qualifies:
            seen.add(key)
            teams.append(key)
    if len(teams) < count:
        raise TeamGenerationError(
            f"only {len(teams)}/{count} {team_class.value} teams of size "
            f"{team_size} found within {max_draws} draws"
        )
    return teams, stats


def draw_reservation(rng: np.random.Generator) -> float:
    """Per-negotiation reservation utility, uniform on [0, 0.25]."""
    return float(rng.uniform(0.0, 0.25))


# ---------------------------------------------------------------------------
# Pool and roster files
# ---------------------------------------------------------------------------


def pool_to_text(pool: ProfilePool, domain: Domain) -> str:
    sections: list[tuple[str, dict[str, str]]] = [
        (
            "pool",
            {
                "size": str(len(pool.member_profiles)),
                "attributes": ", ".join(a.name for a in domain.attributes),
            },
        )
    ]
    for i, profile in enumerate(pool.member_profiles):
        sections.append(
            (
                "member",
                {
                    "index": str(i),
                    "weights": ", ".join(repr(float(w)) for w in profile.weights),
                },
            )
        )
    return write_sections(sections)


def pool_from_text(text: str, domain: Domain) -> ProfilePool:
    members: list[UtilityProfile] = []
    declared_size: int | None = None
    increasing = domain.team_increasing()
    for header, fields in read_sections(text):
        if header == "pool":
            declared_size = int(fields["size"])
            names = parse_list(fields["attributes"])
            expected = [a.name for a in domain.attributes]
            if names != expected:
                raise ValueError(
                    f"pool attributes {names} do not match scenario {expected}"
                )
        elif header == "member":
            weights = np.array([float(w) for w in parse_list(fields["weights"])])
            members.append(UtilityProfile(weights=weights, increasing=increasing))
        else:
            raise ValueError(f"unexpected section [{header}] in pool file")
    if declared_size is not None and declared_size != len(members):
        raise ValueError(
            f"pool declares {declared_size} members but lists {len(members)}"
        )
    members_t = tuple(members)
    return ProfilePool(
        member_profiles=members_t,
        opponent_profiles=tuple(reverse_profile(p) for p in members_t),
    )


def save_pool(pool: ProfilePool, domain: Domain, path: str | Path) -> None:
    Path(path).write_text(pool_to_text(pool, domain))


def load_pool(path: str | Path, domain: Domain) -> ProfilePool:
    return pool_from_text(Path(path).read_text(), domain)


def teams_to_text(teams: list[tuple[int, ...]]) -> str:
    sections = [
        ("team", {"index": str(i), "members": ", ".join(str(m) for m in team)})
        for i, team in enumerate(teams)
    ]
    return write_sections(sections)


def teams_from_text(text: str) -> list[tuple[int, ...]]:
    teams = []
    for header, fields in read_sections(text):
        if header != "team":
            raise ValueError(f"unexpected section [{header}] in teams file")
        teams.append(tuple(int(m) for m in parse_list(fields["members"])))
    return teams


def save_teams(teams: list[tuple[int, ...]], path: str | Path) -> None:
    Path(path).write_text(teams_to_text(teams))


def load_teams(path: str | Path) -> list[tuple[int, ...]]:
    return teams_from_text(Path(path).read_text())
