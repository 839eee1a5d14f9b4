"""Streaming quantile estimator with interpolated equiprobable bins.

The sketch keeps a fixed number of bins that each hold an equal share of
the observed mass (the maximum-entropy histogram for the bin budget).
After every datum, all boundaries are readjusted: the pre-arrival
piecewise-linear CDF gains a unit step at the new value and is re-inverted
at the equiprobable levels.  Until ``bins`` distinct values have arrived,
the sketch stores the exact empirical distribution and quantile queries
are exact.
"""

from __future__ import annotations

from bisect import bisect_left

import numpy as np

from ..histogram import (
    EquiprobableHistogram,
    check_quantile,
    equiprobable_quantiles,
    shifted_lower_bound,
)
from .base import QuantileEstimator, require_finite

__all__ = ["InterpolatedEstimator", "post_arrival_mass_bounds"]


class InterpolatedEstimator(QuantileEstimator):
    """Equiprobable-bin sketch readjusted by inverse-CDF interpolation."""

    def __init__(self, bins: int, lower_bound: float = 0.0) -> None:
        if bins < 2:
            raise ValueError("at least 2 bins required")
        self._capacity = int(bins)
        self._lower_bound = float(lower_bound)
        self._observed = 0
        # Warm-up store: sorted unique values with multiplicities.
        self._warm_values: list[float] | None = []
        self._warm_counts: list[int] | None = []
        self._boundaries: np.ndarray | None = None

    # -- interface ---------------------------------------------------------

    def name(self) -> str:
        return "interpolated"

    def memory_footprint(self) -> int:
        return self._capacity

    @property
    def observed(self) -> int:
        return self._observed

    @property
    def is_warm_up(self) -> bool:
        return self._boundaries is None

    @property
    def lower_bound(self) -> float:
        return self._lower_bound

    @property
    def boundaries(self) -> np.ndarray:
        """Current upper bin boundaries (sorted unique values while warming up)."""
        if self._boundaries is not None:
            return self._boundaries.copy()
        return np.asarray(self._warm_values, dtype=float)

    @property
    def histogram(self) -> EquiprobableHistogram:
        """Steady-state sketch as a value object."""
        if self._boundaries is None:
            raise ValueError("histogram is undefined during warm-up")
        return EquiprobableHistogram(
            boundaries=self._boundaries.copy(),
            total_count=self._observed,
            lower_bound=self._lower_bound,
        )

    # -- updates -----------------------------------------------------------

    def observe(self, value: float) -> None:
        d = require_finite(value)
        if d <= self._lower_bound:
            self._lower_bound = shifted_lower_bound(d)
        if self._boundaries is None:
            self._warm_observe(d)
        else:
            self._steady_update(d)
        self._observed += 1

    def _warm_observe(self, d: float) -> None:
        values, counts = self._warm_values, self._warm_counts
        i = bisect_left(values, d)
        if i < len(values) and values[i] == d:
            counts[i] += 1
        elif len(values) < self._capacity:
            values.insert(i, d)
            counts.insert(i, 1)
        else:
            # Bin budget exhausted by distinct values: switch to the
            # equiprobable sketch and fold this datum in as the first
            # steady-state update.
            self._boundaries = np.asarray(values, dtype=float)
            self._warm_values = None
            self._warm_counts = None
            self._steady_update(d)

    def _steady_update(self, d: float) -> None:
        n = self._capacity
        i = self._observed  # mass before this datum
        b = self._boundaries
        knots_x = np.empty(n + 1)
        knots_x[0] = self._lower_bound
        knots_x[1:] = b
        knots_y = np.arange(n + 1) * (i / n)

        # Mass strictly below-or-at d under the pre-arrival CDF.
        if d >= b[-1]:
            mass_at_d = float(i)
        else:
            mass_at_d = float(np.interp(d, knots_x, knots_y))

        # Invert (pre-arrival CDF + unit step at d) at the equiprobable
        # levels.  Levels at most mass_at_d cross before the step; levels
        # inside (mass_at_d, mass_at_d + 1] cross exactly at the step, i.e.
        # at d; higher levels cross after it, one unit of mass later.
        levels = np.arange(1, n) * ((i + 1) / n)
        adjusted = np.where(levels <= mass_at_d, levels, levels - 1.0)
        new_b = np.empty(n)
        new_b[: n - 1] = np.interp(adjusted, knots_y, knots_x)
        on_step = (levels > mass_at_d) & (levels <= mass_at_d + 1.0)
        new_b[: n - 1][on_step] = d
        new_b[n - 1] = b[-1] if b[-1] >= d else d

        # Rounding can collapse adjacent inverted knots; nudge apart.
        if new_b[0] <= self._lower_bound or np.any(new_b[1:] <= new_b[:-1]):
            floor = self._lower_bound
            for j in range(n):
                if new_b[j] <= floor:
                    new_b[j] = np.nextafter(floor, np.inf)
                floor = new_b[j]
        self._boundaries = new_b

    # -- queries -----------------------------------------------------------

    def estimate(self, q: float) -> float:
        return float(self.estimate_many([q])[0])

    def estimate_many(self, qs) -> np.ndarray:
        if self._observed == 0:
            raise ValueError("no data observed yet")
        qa = np.asarray([check_quantile(q) for q in np.asarray(qs, dtype=float)])
        if self._boundaries is None:
            # Exact empirical quantile over the warm-up multiset, using the
            # same rank rule as the oracle.
            ranks = np.maximum(1, np.ceil(qa * self._observed))
            cum = np.cumsum(self._warm_counts)
            idx = np.searchsorted(cum, ranks, side="left")
            return np.asarray(self._warm_values, dtype=float)[idx]
        return equiprobable_quantiles(self._boundaries, self._lower_bound, qa)


def post_arrival_mass_bounds(
    boundaries: np.ndarray,
    lower_bound: float,
    total: int,
    new_value: float,
    edges: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-bin mass intervals of (pre-arrival CDF + unit atom) over ``edges``.

    Audits the equiprobability of a refreshed boundary set: each bin of a
    correct update must be able to hold ``(total+1)/n`` mass.  The new datum
    is a unit point mass, so its CDF step is a vertical segment; an edge
    placed exactly on the datum may count the atom on either side
    (generalized-inverse semantics), which widens that bin's admissible mass
    to an interval.  Away from the datum the bounds coincide, so every other
    edge is pinned at float precision.

    Returns ``(low, high)`` arrays, one entry per bin of ``edges``.
    """
    n = boundaries.size
    knots_x = np.empty(n + 1)
    knots_x[0] = lower_bound
    knots_x[1:] = boundaries
    knots_y = np.arange(n + 1) * (total / n)
    at = np.concatenate(([lower_bound], np.asarray(edges, dtype=float)))
    cdf = np.interp(at, knots_x, knots_y)
    cdf[at >= boundaries[-1]] = total  # flat beyond the top boundary
    cum_low = cdf + (at > new_value)  # atom counted after the edge
    cum_high = cdf + (at >= new_value)  # atom counted at/before the edge
    return cum_low[1:] - cum_high[:-1], cum_high[1:] - cum_low[:-1]
