"""Approximate empirical CDFs built from epsilon-approximate quantiles.

A CDF approximation is the pair of vectors (probs, quantiles): `a`
equi-spaced probabilities from 1/N to 1 and the quantile summary's answers
at those probabilities.  Linear interpolation between the knots gives a
function within delta = 1/(a-1) + epsilon of the exact empirical CDF.

For a target delta the knot count / query accuracy trade-off follows the
hyperbola a = 1/(delta - epsilon) + 1; `eps45` picks the unit-slope point
of that curve (in coordinates a/N versus epsilon/delta), which fixes both
parameters in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gk_sketch import QuantileSketch

__all__ = [
    "CdfPlan",
    "ApproxCdf",
    "eps45",
    "num_probs",
    "plan_from_phi",
    "build_cdf",
    "eval_cdf",
    "error_bound",
    "empirical_cdf",
]

_EQ_TOL = 1e-12


@dataclass(frozen=True)
class CdfPlan:
    """Approximation parameters: sample size, error bound, knot count.

    Invariant: 1/(a-1) + epsilon <= delta (the certified error bound), with
    3 <= a <= n and 0 <= epsilon < delta < 1.
    """

    n: int
    delta: float
    epsilon: float
    a: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        if not 0 <= self.epsilon < self.delta:
            raise ValueError(
                f"epsilon must satisfy 0 <= epsilon < delta, got {self.epsilon}"
            )
        if not 3 <= self.a <= self.n:
            raise ValueError(f"a must be in [3, n], got a={self.a}, n={self.n}")
        if 1.0 / (self.a - 1) + self.epsilon > self.delta + _EQ_TOL:
            raise ValueError(
                f"plan violates its error bound: 1/(a-1) + epsilon = "
                f"{1.0 / (self.a - 1) + self.epsilon} > delta = {self.delta}"
            )


class ApproxCdf:
    """Immutable approximate CDF: probability knots and their quantiles."""

    def __init__(self, plan: CdfPlan, probs: np.ndarray, quantiles: np.ndarray):
        probs = np.asarray(probs, dtype=float)
        quantiles = np.asarray(quantiles, dtype=float)
        if probs.shape != quantiles.shape or probs.ndim != 1:
            raise ValueError("probs and quantiles must be 1-d and equally long")
        if np.any(np.diff(probs) <= 0):
            raise ValueError("probs must be strictly increasing")
        if probs[0] != 1.0 / plan.n or probs[-1] != 1.0:
            raise ValueError("probs must run from 1/n to 1 inclusive")
        if np.any(np.diff(quantiles) < 0):
            raise ValueError("quantiles must be non-decreasing")
        probs.flags.writeable = False
        quantiles.flags.writeable = False
        self.plan = plan
        self.probs = probs
        self.quantiles = quantiles

    def evaluate(self, x):
        return eval_cdf(self, x)


def eps45(delta: float, n: int) -> float:
    """Quantile-query error at the unit-slope point of the trade-off curve.

    Equals delta - sqrt(delta/n), clamped at 0 (no approximation) when the
    sample is too small for the requested bound.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return max(0.0, delta - math.sqrt(delta / n))


def num_probs(n: int, delta: float, epsilon: float) -> int:
    """Number of probability knots needed for the bound delta at accuracy epsilon."""
    if epsilon >= delta:
        raise ValueError(f"epsilon must be < delta, got {epsilon} >= {delta}")
    return min(math.ceil(1.0 / (delta - epsilon) + 1.0), n)


def plan_from_phi(phi: float, n: int) -> CdfPlan:
    """Plan a CDF whose contribution to a KS-distance error stays under phi/2."""
    if not 0 < phi < 2:
        raise ValueError(f"phi must be in (0, 2), got {phi}")
    delta = phi / 2.0
    epsilon = eps45(delta, n)
    a = num_probs(n, delta, epsilon)
    if 1.0 / (a - 1) + epsilon > delta + _EQ_TOL:
        raise ValueError(
            f"sample of {n} points cannot reach a CDF error bound of {delta}"
        )
    return CdfPlan(n=n, delta=delta, epsilon=epsilon, a=a)


def _knot_probs(n: int, a: int) -> np.ndarray:
    # p_i = 1/n + i*(1 - 1/n)/(a-1); endpoints pinned exactly
    first = 1.0 / n
    probs = first + np.arange(a) * ((1.0 - first) / (a - 1))
    probs[0] = first
    probs[-1] = 1.0
    return probs


def build_cdf(data, plan: CdfPlan) -> ApproxCdf:
    """Construct the approximate CDF of `data` under `plan`.

    epsilon = 0 bypasses the sketch and reads exact order statistics at
    ranks ceil(p*n) from a full sort.
    """
    values = np.asarray(data, dtype=float).ravel()
    if values.size != plan.n:
        raise ValueError(f"plan expects {plan.n} observations, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise ValueError("data contains non-finite values")
    probs = _knot_probs(plan.n, plan.a)
    if plan.epsilon == 0.0:
        ordered = np.sort(values)
        ranks = np.ceil(probs * plan.n).astype(int)
        np.clip(ranks, 1, plan.n, out=ranks)
        quantiles = ordered[ranks - 1]
    else:
        sketch = QuantileSketch(plan.epsilon)
        sketch.extend(values.tolist())
        sketch.seal()
        quantiles = np.asarray(sketch.query_quantiles(probs.tolist()))
    return ApproxCdf(plan, probs, quantiles)


def eval_cdf(cdf: ApproxCdf, x):
    """Piecewise-linear interpolation of the knots at x (scalar or array).

    Clamps to probs[0] below the first knot and to 1 above the last; at a
    run of duplicate knots returns the largest tied probability (step
    behaviour, keeps the function monotone).
    """
    q, p = cdf.quantiles, cdf.probs
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    if not np.all(np.isfinite(xs)):
        raise ValueError("eval_cdf requires finite x")
    idx = np.searchsorted(q, xs, side="right")
    out = np.empty(xs.shape)
    below = idx == 0
    above = idx == q.size
    mid = ~below & ~above
    out[below] = p[0]
    out[above] = 1.0
    if np.any(mid):
        hi = idx[mid]
        lo = hi - 1
        # q[lo] <= x < q[hi] and q[hi] > q[lo]; at x == q[lo] this yields
        # p[lo], the largest probability of a duplicate run (side="right").
        frac = (xs[mid] - q[lo]) / (q[hi] - q[lo])
        out[mid] = p[lo] + frac * (p[hi] - p[lo])
    return float(out[0]) if scalar else out


def error_bound(plan: CdfPlan) -> float:
    """Certified bound on |approximate CDF - exact empirical CDF|."""
    return 1.0 / (plan.a - 1) + plan.epsilon


def empirical_cdf(sample, x):
    """Exact right-continuous empirical CDF: F(x) = #{v <= x} / n.

    `sample` may be pre-sorted or not; x scalar or array.
    """
    ordered = np.sort(np.asarray(sample, dtype=float).ravel())
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    ranks = np.searchsorted(ordered, np.atleast_1d(xs), side="right")
    out = ranks / ordered.size
    return float(out[0]) if scalar else out
