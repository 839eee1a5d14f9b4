"""Exact ground-truth quantiles over the full history of a stream.

Deliberately unbounded in memory: the store keeps every observation in an
order-maintaining multiset so the evaluation harness can query the true
running quantile at every step.  ``sortedcontainers.SortedList`` provides
O(log n) insertion and rank lookup, which keeps a million inserts plus a
million rank queries in the seconds range.
"""

from __future__ import annotations

import math

from sortedcontainers import SortedList

from .histogram import check_quantile

__all__ = ["ExactQuantileStore", "target_rank"]


def target_rank(q: float, count: int) -> int:
    """1-based rank of the q-quantile in a sorted multiset of ``count`` items.

    Fixed as ``max(1, ceil(q * count))``: the smallest rank whose element has
    at least a fraction ``q`` of the data at or below it.  Every component
    that answers empirical quantiles (oracle, warm-up estimators, reservoir)
    shares this rule so their answers agree exactly.
    """
    return max(1, math.ceil(q * count))


class ExactQuantileStore:
    """Multiset of all observed values supporting exact rank queries."""

    def __init__(self, values=None) -> None:
        self._data = SortedList(values or [])

    def __len__(self) -> int:
        return len(self._data)

    def observe(self, value: float) -> None:
        """Add one observation (duplicates are kept)."""
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"observation must be finite, got {value}")
        self._data.add(value)

    def quantile(self, q: float) -> float:
        """Exact q-quantile of everything observed so far."""
        q = check_quantile(q)
        n = len(self._data)
        if n == 0:
            raise ValueError("no data observed yet")
        return self._data[target_rank(q, n) - 1]

    def quantiles(self, qs) -> list[float]:
        """Exact quantiles for several fractions at once."""
        n = len(self._data)
        if n == 0:
            raise ValueError("no data observed yet")
        data = self._data
        return [data[target_rank(check_quantile(q), n) - 1] for q in qs]
