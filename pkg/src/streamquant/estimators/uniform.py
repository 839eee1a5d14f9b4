"""Uniform adjustable histogram with equidistant, rescaling bins.

Reference: Schmeiser, B. W. and Deutsch, S. J. (1977). Quantile estimation
from grouped data: the cell midpoint. Communications in Statistics B6(3).

A fixed number of equal-width bins covers the data range seen so far.  A
datum outside the range widens the bins by an integer factor (at least 2)
and folds every old bin's count into whichever new bin contains its
midpoint.  The midpoint fold is deliberately kept: squeezing many narrow
bins into one wide bin after a large outlier is this method's
characteristic failure mode, and the estimator reproduces it faithfully.
"""

from __future__ import annotations

import math

import numpy as np

from .base import QuantileEstimator, require_finite
from ..histogram import check_quantile, counted_quantiles

__all__ = ["UniformHistogramEstimator"]

_INIT_MARGIN = 1e-9  # widens the initial grid so the first datum falls inside


class UniformHistogramEstimator(QuantileEstimator):
    """Equidistant-bin histogram that rescales to cover the data range."""

    def __init__(self, bins: int, fallback_span: float = 2.0) -> None:
        if bins < 2:
            raise ValueError("at least 2 bins required")
        if fallback_span <= 0:
            raise ValueError("fallback_span must be positive")
        self._n = int(bins)
        self._fallback_span = float(fallback_span)
        self._counts = np.zeros(self._n)
        self._origin = 0.0
        self._width = 0.0
        self._observed = 0
        self._cum_stale = True
        self._cum = np.empty(self._n)

    def name(self) -> str:
        return "uniform"

    def memory_footprint(self) -> int:
        return self._n

    @property
    def observed(self) -> int:
        return self._observed

    @property
    def origin(self) -> float:
        return self._origin

    @property
    def bin_width(self) -> float:
        return self._width

    @property
    def counts(self) -> np.ndarray:
        return self._counts.copy()

    @property
    def range_min(self) -> float:
        return self._origin

    @property
    def range_max(self) -> float:
        return self._origin + self._n * self._width

    def observe(self, value: float) -> None:
        d = require_finite(value)
        if self._observed == 0:
            self._init_grid(d)
        elif d > self.range_max:
            self._grow_up(d)
        elif d <= self._origin:
            self._grow_down(d)
        self._counts[self._bin_index(d)] += 1.0
        self._observed += 1
        self._cum_stale = True

    def _init_grid(self, d: float) -> None:
        if d > 0.0:
            self._origin = 0.0
            self._width = d * (1.0 + _INIT_MARGIN) / self._n
        else:
            # Non-positive first datum: fall back to a configured span
            # centred on it.
            self._origin = d - self._fallback_span / 2.0
            self._width = self._fallback_span / self._n

    def _bin_index(self, d: float) -> int:
        # Right-closed bins: (origin + (j-1) w, origin + j w].
        idx = math.ceil((d - self._origin) / self._width) - 1
        return min(max(idx, 0), self._n - 1)

    def _grow_up(self, d: float) -> None:
        n, w = self._n, self._width
        factor = max(2, math.ceil((d - self._origin) / (n * w)))
        while self._origin + n * factor * w < d:
            factor += 1
        self._rescale(self._origin, factor * w)

    def _grow_down(self, d: float) -> None:
        # Hold the top edge fixed and extend the range downward.
        n, w = self._n, self._width
        top = self._origin + n * w
        factor = max(2, math.ceil((top - d) / (n * w)))
        while top - n * factor * w >= d:
            factor += 1
        self._rescale(top - n * factor * w, factor * w)

    def _rescale(self, new_origin: float, new_width: float) -> None:
        n = self._n
        mids = self._origin + (np.arange(n) + 0.5) * self._width
        idx = np.ceil((mids - new_origin) / new_width).astype(int) - 1
        np.clip(idx, 0, n - 1, out=idx)
        folded = np.zeros(n)
        np.add.at(folded, idx, self._counts)
        self._counts = folded
        self._origin = new_origin
        self._width = new_width

    def estimate(self, q: float) -> float:
        return float(self.estimate_many([q])[0])

    def estimate_many(self, qs) -> np.ndarray:
        if self._observed == 0:
            raise ValueError("no data observed yet")
        qa = np.asarray([check_quantile(q) for q in np.asarray(qs, dtype=float)])
        if self._cum_stale:
            np.cumsum(self._counts, out=self._cum)
            self._cum_stale = False
        boundaries = self._origin + self._width * np.arange(1, self._n + 1)
        return counted_quantiles(boundaries, self._counts, self._origin, qa, cum=self._cum)
