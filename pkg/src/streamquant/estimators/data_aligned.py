"""Streaming quantile estimator with data-aligned bins.

Bin boundaries are constrained to values that actually occurred in the
stream.  Each new datum first becomes the boundary of a temporary extra
bin (splitting the bin it lands in, with linearly interpolated mass);
the bin budget is then restored by merging the one neighbouring pair
whose merge keeps the histogram entropy highest.  At most a single
boundary changes per datum, so no repeated-interpolation drift builds up.
"""

from __future__ import annotations

import math

import numpy as np

from ..histogram import (
    CountedHistogram,
    check_quantile,
    counted_quantiles,
    entropy,
    mass_log2_mass,
    merge_pair,
    shifted_lower_bound,
)
from .base import QuantileEstimator, require_finite

__all__ = [
    "DataAlignedEstimator",
    "insert_temporary",
    "best_merge",
    "best_merge_exhaustive",
    "merge_gains",
]


def merge_gains(counts: np.ndarray) -> np.ndarray:
    """Entropy cost of merging each neighbouring pair, up to shared terms.

    With ``g(x) = x * log2(x)``, merging pair ``k`` changes the (unnormalized)
    entropy sum by ``g(c[k] + c[k+1]) - g(c[k]) - g(c[k+1])``; the candidate
    with the smallest gain yields the maximum-entropy merge.  The two original
    terms are added together before subtracting so mass-symmetric candidates
    come out bit-for-bit equal and ties resolve to the smallest index.
    """
    c = np.asarray(counts, dtype=float)
    g = mass_log2_mass(c)
    return mass_log2_mass(c[:-1] + c[1:]) - (g[:-1] + g[1:])


def best_merge(hist: CountedHistogram) -> int:
    """1-based index of the neighbour pair whose merge maximizes entropy.

    Ties break toward the smallest index.
    """
    if hist.nbins < 2:
        raise ValueError("need at least 2 bins to merge")
    return int(np.argmin(merge_gains(hist.counts))) + 1


def best_merge_exhaustive(hist: CountedHistogram) -> int:
    """Reference merge chooser: evaluate every candidate's full entropy.

    O(n^2); kept for verifying the incremental selection in tests.
    """
    nbins = hist.nbins
    if nbins < 2:
        raise ValueError("need at least 2 bins to merge")
    best_k, best_h = 1, -math.inf
    for k in range(1, nbins):
        h = entropy(merge_pair(hist, k).counts)
        if h > best_h:
            best_k, best_h = k, h
    return best_k


def insert_temporary(hist: CountedHistogram, value: float) -> CountedHistogram:
    """Split in the new datum as a temporary extra bin.

    A datum above the top boundary appends a fresh unit-count bin; otherwise
    the covering bin ``(b[j-1], b[j]]`` is split at ``d`` with the new bin
    taking ``c[j] * theta + 1`` and the remainder keeping ``c[j] * (1-theta)``
    where ``theta`` is the datum's position inside the bin.  Total mass grows
    by exactly one datum.
    """
    d = require_finite(value)
    b, c = hist.boundaries, hist.counts
    if d <= hist.lower_bound:
        raise ValueError("value at or below the histogram's lower bound")
    if d > b[-1]:
        return CountedHistogram(
            boundaries=np.append(b, d),
            counts=np.append(c, 1.0),
            lower_bound=hist.lower_bound,
        )
    idx = int(np.searchsorted(b, d, side="left"))
    if b[idx] == d:
        raise ValueError("value equals an existing boundary; handled by observe()")
    left = b[idx - 1] if idx > 0 else hist.lower_bound
    theta = (d - left) / (b[idx] - left)
    cj = float(c[idx])
    new_counts = np.insert(c, idx, cj * theta + 1.0)
    new_counts[idx + 1] = cj * (1.0 - theta)
    return CountedHistogram(
        boundaries=np.insert(b, idx, d),
        counts=new_counts,
        lower_bound=hist.lower_bound,
    )


class DataAlignedEstimator(QuantileEstimator):
    """Counted histogram whose boundaries are observed data values."""

    def __init__(self, bins: int, lower_bound: float = 0.0) -> None:
        if bins < 2:
            raise ValueError("at least 2 bins required")
        self._capacity = int(bins)
        self._lower_bound = float(lower_bound)
        self._observed = 0
        self._size = 0
        self._steady = False
        # One slot of headroom for the temporary bin.
        self._b = np.empty(self._capacity + 1)
        self._c = np.empty(self._capacity + 1)
        self._cum = np.empty(self._capacity + 1)
        self._cum_stale = True

    # -- interface ---------------------------------------------------------

    def name(self) -> str:
        return "data-aligned"

    def memory_footprint(self) -> int:
        return self._capacity

    @property
    def observed(self) -> int:
        return self._observed

    @property
    def is_warm_up(self) -> bool:
        return not self._steady

    @property
    def lower_bound(self) -> float:
        return self._lower_bound

    @property
    def histogram(self) -> CountedHistogram:
        if self._size == 0:
            raise ValueError("no data observed yet")
        return CountedHistogram(
            boundaries=self._b[: self._size].copy(),
            counts=self._c[: self._size].copy(),
            lower_bound=self._lower_bound,
        )

    def snapshot(self) -> tuple[np.ndarray, np.ndarray]:
        """Debug hook: copies of (boundaries, counts) for bin-evolution dumps."""
        m = self._size
        return self._b[:m].copy(), self._c[:m].copy()

    # -- updates -----------------------------------------------------------

    def observe(self, value: float) -> None:
        d = require_finite(value)
        if d <= self._lower_bound:
            self._lower_bound = shifted_lower_bound(d)
        m = self._size
        b, c = self._b, self._c
        idx = int(np.searchsorted(b[:m], d, side="left"))
        if idx < m and b[idx] == d:
            # Repeat of an existing boundary: bump its bin, no structure change.
            c[idx] += 1.0
        elif m < self._capacity:
            # Warm-up: every distinct value gets its own bin.
            if idx < m:
                b[idx + 1 : m + 1] = b[idx:m].copy()
                c[idx + 1 : m + 1] = c[idx:m].copy()
            b[idx] = d
            c[idx] = 1.0
            self._size = m + 1
        else:
            self._split_and_merge(d, idx)
        self._observed += 1
        self._cum_stale = True

    def _split_and_merge(self, d: float, idx: int) -> None:
        n = self._capacity
        self._steady = True
        b, c = self._b, self._c
        if idx == n:
            b[n] = d
            c[n] = 1.0
        else:
            left = b[idx - 1] if idx > 0 else self._lower_bound
            theta = (d - left) / (b[idx] - left)
            cj = float(c[idx])
            b[idx + 1 : n + 1] = b[idx:n].copy()
            c[idx + 1 : n + 1] = c[idx:n].copy()
            b[idx] = d
            c[idx] = cj * theta + 1.0
            c[idx + 1] = cj * (1.0 - theta)
        k = int(np.argmin(merge_gains(c[: n + 1])))
        c[k + 1] = float(c[k]) + float(c[k + 1])
        b[k:n] = b[k + 1 : n + 1].copy()
        c[k:n] = c[k + 1 : n + 1].copy()

    # -- queries -----------------------------------------------------------

    def estimate(self, q: float) -> float:
        return float(self.estimate_many([q])[0])

    def estimate_many(self, qs) -> np.ndarray:
        if self._observed == 0:
            raise ValueError("no data observed yet")
        qa = np.asarray([check_quantile(q) for q in np.asarray(qs, dtype=float)])
        m = self._size
        if self._cum_stale:
            np.cumsum(self._c[:m], out=self._cum[:m])
            self._cum_stale = False
        if not self._steady:
            # Warm-up: the sketch is the exact multiset (unique values with
            # multiplicities), so answer with the oracle's rank rule.
            ranks = np.maximum(1, np.ceil(qa * self._observed))
            idx = np.searchsorted(self._cum[:m], ranks, side="left")
            return self._b[:m][idx].copy()
        return counted_quantiles(
            self._b[:m], self._c[:m], self._lower_bound, qa, cum=self._cum[:m]
        )
