"""Greenwald-Khanna summary for epsilon-approximate quantile queries.

The summary keeps an ordered list of (value, g, delta) tuples where g is the
gap between the minimum ranks of consecutive stored values and delta is the
rank uncertainty of a stored value.  For a stream of n items it answers any
quantile query at probability p with a value whose true rank r satisfies

    floor((p - eps) * n) <= r <= ceil((p + eps) * n)

while storing O((1/eps) * log(eps * n)) tuples.

Follows the SIGMOD 2001 algorithm: new values enter with g = 1 and
delta = floor(2*eps*n) (0 at either extreme), COMPRESS merges a tuple into
its right neighbour when g_i + g_{i+1} + delta_{i+1} <= floor(2*eps*n) and
the band of delta_i does not exceed the band of delta_{i+1}.  Ranks are
1-based; ties take consecutive ranks in insertion order.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

__all__ = ["SketchTuple", "QuantileSketch", "SketchStateError"]


class SketchStateError(RuntimeError):
    """Operation applied to a sketch in the wrong state (sealed/empty)."""


@dataclass(frozen=True)
class SketchTuple:
    """One stored observation with its rank-tracking counters."""

    value: float
    g: int
    delta: int


def _band(delta: int, threshold: int) -> int:
    """Band index of a delta given the current threshold floor(2*eps*n).

    Bands grow with threshold - delta, so older tuples (small delta) sit in
    higher bands; COMPRESS only folds a tuple into a right neighbour of
    equal or higher band.
    """
    return (threshold - delta + 1).bit_length() - 1


class QuantileSketch:
    """Streaming epsilon-approximate quantile summary.

    Single-writer while inserting; immutable (and freely shareable) once
    sealed.  `auto_compress=False` disables the periodic COMPRESS schedule,
    which is only useful for inspecting the raw summary.
    """

    def __init__(self, epsilon: float, auto_compress: bool = True):
        if not 0 < epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
        self.epsilon = epsilon
        self._values: list[float] = []
        self._g: list[int] = []
        self._delta: list[int] = []
        self._count = 0
        self._sealed = False
        self._auto_compress = auto_compress
        # compress every floor(1/(2*eps)) insertions
        self._period = max(1, math.floor(1.0 / (2.0 * epsilon)))
        self._ranks: tuple[list[int], list[int]] | None = None

    @property
    def count(self) -> int:
        return self._count

    @property
    def sealed(self) -> bool:
        return self._sealed

    @property
    def tuples(self) -> tuple[SketchTuple, ...]:
        return tuple(
            SketchTuple(v, g, d)
            for v, g, d in zip(self._values, self._g, self._delta)
        )

    @property
    def tuple_count(self) -> int:
        return len(self._values)

    @property
    def stored_values(self) -> tuple[float, ...]:
        return tuple(self._values)

    def insert(self, value: float) -> None:
        """Add one observation; triggers COMPRESS on the periodic schedule."""
        if self._sealed:
            raise SketchStateError("cannot insert into a sealed sketch")
        if not math.isfinite(value):
            raise ValueError(f"value must be finite, got {value}")
        value = float(value)
        self._count += 1
        pos = bisect.bisect_right(self._values, value)
        if pos == 0 or pos == len(self._values):
            delta = 0
        else:
            delta = math.floor(2.0 * self.epsilon * self._count)
        self._values.insert(pos, value)
        self._g.insert(pos, 1)
        self._delta.insert(pos, delta)
        self._ranks = None
        if self._auto_compress and self._count % self._period == 0:
            self.compress()

    def extend(self, values) -> None:
        for v in values:
            self.insert(v)

    def compress(self) -> None:
        """Merge adjacent tuples while the GK maintenance condition allows.

        Right-to-left pass; tuple i is folded into its current right
        neighbour when g_i + g_next + delta_next <= floor(2*eps*n) and the
        band condition holds.  The extreme tuples are never removed, so the
        exact minimum and maximum stay queryable.
        """
        if len(self._values) < 3:
            return
        threshold = math.floor(2.0 * self.epsilon * self._count)
        if threshold < 2:
            return
        values, gs, deltas = self._values, self._g, self._delta
        kept_v = [values[-1]]
        kept_g = [gs[-1]]
        kept_d = [deltas[-1]]
        for i in range(len(values) - 2, 0, -1):
            if (
                gs[i] + kept_g[-1] + kept_d[-1] <= threshold
                and _band(deltas[i], threshold) <= _band(kept_d[-1], threshold)
            ):
                kept_g[-1] += gs[i]
            else:
                kept_v.append(values[i])
                kept_g.append(gs[i])
                kept_d.append(deltas[i])
        kept_v.append(values[0])
        kept_g.append(gs[0])
        kept_d.append(deltas[0])
        kept_v.reverse()
        kept_g.reverse()
        kept_d.reverse()
        self._values, self._g, self._delta = kept_v, kept_g, kept_d
        self._ranks = None

    def seal(self) -> "QuantileSketch":
        """Freeze the sketch; queries remain available, insertion does not."""
        self._sealed = True
        return self

    def _rank_arrays(self) -> tuple[list[int], list[int]]:
        if self._ranks is None:
            rmin: list[int] = []
            rmax: list[int] = []
            acc = 0
            for g, d in zip(self._g, self._delta):
                acc += g
                rmin.append(acc)
                rmax.append(acc + d)
            self._ranks = (rmin, rmax)
        return self._ranks

    def query_quantile(self, p: float) -> float:
        """Value whose rank satisfies the eps-approximate quantile contract.

        Scans the cumulative rank intervals and returns the first stored
        value whose [r_min, r_max] fits inside
        [floor((p-eps)n), ceil((p+eps)n)].  Requests below 1/n are answered
        as p = 1/n; p = 1 returns the maximum.
        """
        if self._count == 0:
            raise SketchStateError("cannot query an empty sketch")
        if not 0 < p <= 1:
            raise ValueError(f"p must be in (0, 1], got {p}")
        if p == 1.0:
            return self._values[-1]
        n = self._count
        p = max(p, 1.0 / n)
        lo = math.floor((p - self.epsilon) * n)
        hi = math.ceil((p + self.epsilon) * n)
        rmin, rmax = self._rank_arrays()
        start = bisect.bisect_left(rmin, lo)
        for i in range(start, len(rmin)):
            if rmax[i] <= hi:
                return self._values[i]
        return self._values[-1]

    def query_quantiles(self, probs) -> list[float]:
        """Element-wise quantile queries for a non-decreasing probability grid.

        Results are clamped to be non-decreasing; GK answers already are for
        monotone targets, the clamp is a defensive guarantee.
        """
        probs = list(probs)
        if not probs:
            raise ValueError("probs must be non-empty")
        if any(b < a for a, b in zip(probs, probs[1:])):
            raise ValueError("probs must be non-decreasing")
        out: list[float] = []
        for p in probs:
            q = self.query_quantile(p)
            if out and q < out[-1]:
                q = out[-1]
            out.append(q)
        return out

    def rank_bounds(self, value: float) -> tuple[int, int]:
        """Interval [r_min, r_max] containing the exact rank of `value`.

        Rank means the number of stream items <= value, so anything below
        the minimum maps to (0, 0) and anything at or above the maximum to
        (n, n).  Interval width is at most 2*eps*n + 1.
        """
        if not self._sealed:
            raise SketchStateError("rank_bounds requires a sealed sketch")
        if self._count == 0:
            raise SketchStateError("cannot query an empty sketch")
        if value < self._values[0]:
            return (0, 0)
        if value > self._values[-1]:
            return (self._count, self._count)
        i = bisect.bisect_right(self._values, value) - 1
        rmin, rmax = self._rank_arrays()
        if i == len(self._values) - 1:
            return (self._count, self._count)
        return (rmin[i], rmax[i + 1] - 1)
