"""Offer search on iso-utility sets via similarity maximization.

An iso-utility set for a linear additive profile is, in valuation space
v = V(x), the slice of the unit box cut by the hyperplane w . v = target.
Flipping decreasing attributes (x -> 1 - x) is an isometry, so Euclidean
distances — and hence the similarity Sim(x, y) = 1 - d(x, y) / sqrt(n) —
are identical in offer space and valuation space. All search therefore
happens in valuation space and maps back at the end.

Single reference: the most similar feasible offer is the Euclidean
projection of the reference onto the box-hyperplane intersection. The
projection has the water-filling form v = clip(r + lam * w, 0, 1) for the
scalar lam solving w . v(lam) = target; g(lam) = w . v(lam) is piecewise
linear and nondecreasing, so lam is found exactly from its breakpoints.

Two references: the maximizer of Sim(x, p) * Sim(x, q) over the iso-set is
Pareto-optimal for the pair of distances (d_p, d_q), and for two convex
quadratics over a convex set the Pareto set is exactly the curve of
projections of the segment joining p and q. A refined one-dimensional scan
of that curve recovers the product maximizer; it degenerates to the single
reference projection when p = q.
"""

from __future__ import annotations

import math

import numpy as np

from .domain import Offer, UtilityProfile, _check_dims

# Utilities achieved by the projection are exact up to float rounding; this
# is the advertised guarantee on |U(offer) - target|.
TARGET_TOL = 1e-6

_COARSE_POINTS = 129
_REFINE_POINTS = 33
_REFINE_STAGES = 2


def similarity(x: Offer, y: Offer) -> float:
    """Similarity in [0, 1]: 1 - d(x, y) / sqrt(n), d Euclidean."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"offer shapes differ: {a.shape} vs {b.shape}")
    return 1.0 - float(np.linalg.norm(a - b)) / math.sqrt(a.size)


def _project_valuations(
    weights: np.ndarray, target: float, refs: np.ndarray
) -> np.ndarray:
    """Project valuation points (rows of refs) onto the iso slice.

    Solves min ||v - r||^2 s.t. w . v = target, 0 <= v <= 1 for every row
    at once. Zero-weight coordinates are unconstrained and keep their
    reference value, which is similarity-optimal.
    """
    pos = weights > 0.0
    wa = weights[pos]
    m = wa.size
    r = refs[:, pos]
    # Breakpoints where a coordinate of clip(r + lam*w) enters/leaves a bound.
    bounds = np.concatenate(((0.0 - r) / wa, (1.0 - r) / wa), axis=1)
    bp = np.sort(bounds, axis=1)
    v_at = np.clip(r[:, None, :] + bp[:, :, None] * wa[None, None, :], 0.0, 1.0)
    g = v_at @ wa  # nondecreasing along axis 1, from 0 to sum(wa)
    k = np.clip(np.sum(g <= target, axis=1) - 1, 0, 2 * m - 2)
    rows = np.arange(refs.shape[0])
    g0, g1 = g[rows, k], g[rows, k + 1]
    b0, b1 = bp[rows, k], bp[rows, k + 1]
    span = g1 - g0
    frac = np.where(span > 0.0, (target - g0) / np.where(span > 0.0, span, 1.0), 0.0)
    lam = b0 + np.clip(frac, 0.0, 1.0) * (b1 - b0)
    out = np.array(refs, dtype=float)
    out[:, pos] = np.clip(r + lam[:, None] * wa, 0.0, 1.0)
    return out


def _to_valuation(profile: UtilityProfile, offer: np.ndarray) -> np.ndarray:
    return np.where(profile.increasing, offer, 1.0 - offer)


def _from_valuation(profile: UtilityProfile, v: np.ndarray) -> np.ndarray:
    return np.where(profile.increasing, v, 1.0 - v)


def _check_target(target: float) -> float:
    if not 0.0 <= target <= 1.0:
        raise ValueError(f"target utility must be in [0,1], got {target}")
    return float(target)


def iso_offer(profile: UtilityProfile, target: float, reference: Offer) -> Offer:
    """Offer with utility ``target`` most similar to ``reference``."""
    target = _check_target(target)
    ref = _check_dims(profile.size, reference)
    r = _to_valuation(profile, ref)[None, :]
    v = _project_valuations(profile.weights, target, r)[0]
    return _from_valuation(profile, v)


def iso_offer_dual(
    profile: UtilityProfile,
    target: float,
    ref_primary: Offer,
    ref_secondary: Offer,
) -> Offer:
    """Offer at ``target`` maximizing Sim(., primary) * Sim(., secondary)."""
    target = _check_target(target)
    p = _to_valuation(profile, _check_dims(profile.size, ref_primary))
    q = _to_valuation(profile, _check_dims(profile.size, ref_secondary))
    n = profile.size
    sqrt_n = math.sqrt(n)
    w = profile.weights

    if np.array_equal(p, q):
        v = _project_valuations(w, target, p[None, :])[0]
        return _from_valuation(profile, v)

    def best_on(alphas: np.ndarray) -> tuple[float, float, np.ndarray]:
        refs = p[None, :] + alphas[:, None] * (q - p)[None, :]
        v = _project_valuations(w, target, refs)
        d_p = np.linalg.norm(v - p, axis=1)
        d_q = np.linalg.norm(v - q, axis=1)
        f = (1.0 - d_p / sqrt_n) * (1.0 - d_q / sqrt_n)
        i = int(np.argmax(f))
        return float(alphas[i]), float(f[i]), v[i]

    alphas = np.linspace(0.0, 1.0, _COARSE_POINTS)
    width = 1.0 / (_COARSE_POINTS - 1)
    alpha, best_f, best_v = best_on(alphas)
    for _ in range(_REFINE_STAGES):
        lo = max(0.0, alpha - width)
        hi = min(1.0, alpha + width)
        alpha, f, v = best_on(np.linspace(lo, hi, _REFINE_POINTS))
        if f > best_f:
            best_f, best_v = f, v
        width = (hi - lo) / (_REFINE_POINTS - 1)
    return _from_valuation(profile, best_v)
