"""P-squared dynamic quantile tracker.

Reference: Jain, R. and Chlamtac, I. (1985). The P^2 algorithm for dynamic
calculation of quantiles and histograms without storing observations.
CACM 28(10).

Five markers track (min, q/2, q, (1+q)/2, max) of one target fraction q.
Marker heights move by parabolic interpolation when that keeps them
ordered, otherwise linearly.  Memory is constant: five heights plus five
positions regardless of any configured buffer size.
"""

from __future__ import annotations

from bisect import insort

from .base import QuantileEstimator, require_finite
from ..histogram import check_quantile
from ..oracle import target_rank

__all__ = ["P2Estimator"]


class P2Estimator(QuantileEstimator):
    """Five-marker quantile tracker for a single target fraction."""

    requires_target_quantile = True

    def __init__(self, quantile: float) -> None:
        self._q = check_quantile(quantile)
        self._heights: list[float] = []
        self._positions: list[int] | None = None
        self._desired: list[float] | None = None
        self._observed = 0

    def name(self) -> str:
        return "p2"

    def memory_footprint(self) -> int:
        return 5

    @property
    def observed(self) -> int:
        return self._observed

    @property
    def quantile(self) -> float:
        return self._q

    @property
    def marker_heights(self) -> tuple[float, ...]:
        return tuple(self._heights)

    @property
    def marker_positions(self) -> tuple[int, ...] | None:
        return tuple(self._positions) if self._positions is not None else None

    def observe(self, value: float) -> None:
        d = require_finite(value)
        self._observed += 1
        if self._positions is None:
            insort(self._heights, d)
            if len(self._heights) == 5:
                q = self._q
                self._positions = [1, 2, 3, 4, 5]
                self._desired = [1.0, 1.0 + 2.0 * q, 1.0 + 4.0 * q, 3.0 + 2.0 * q, 5.0]
            return

        h, pos, desired = self._heights, self._positions, self._desired
        q = self._q

        if d < h[0]:
            h[0] = d
            cell = 0
        elif d >= h[4]:
            h[4] = d
            cell = 3
        else:
            cell = 0
            for i in range(3, -1, -1):
                if h[i] <= d:
                    cell = i
                    break
        for i in range(cell + 1, 5):
            pos[i] += 1
        desired[1] += q / 2.0
        desired[2] += q
        desired[3] += (1.0 + q) / 2.0
        desired[4] += 1.0

        for i in (1, 2, 3):
            delta = desired[i] - pos[i]
            if (delta >= 1.0 and pos[i + 1] - pos[i] > 1) or (
                delta <= -1.0 and pos[i - 1] - pos[i] < -1
            ):
                step = 1 if delta >= 1.0 else -1
                cand = h[i] + (step / (pos[i + 1] - pos[i - 1])) * (
                    (pos[i] - pos[i - 1] + step) * (h[i + 1] - h[i]) / (pos[i + 1] - pos[i])
                    + (pos[i + 1] - pos[i] - step) * (h[i] - h[i - 1]) / (pos[i] - pos[i - 1])
                )
                if not h[i - 1] < cand < h[i + 1]:
                    # Parabolic move would disorder the markers; step linearly.
                    cand = h[i] + step * (h[i + step] - h[i]) / (pos[i + step] - pos[i])
                h[i] = cand
                pos[i] += step

    def estimate(self, q: float) -> float:
        q = check_quantile(q)
        if q != self._q:
            raise ValueError(
                f"this tracker targets q={self._q}; requested q={q}"
            )
        if self._observed == 0:
            raise ValueError("no data observed yet")
        if self._positions is None:
            # Fewer than five observations stored: exact empirical quantile.
            return self._heights[target_rank(q, len(self._heights)) - 1]
        return self._heights[2]
