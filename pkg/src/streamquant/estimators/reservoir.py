"""Fixed-size uniform random sample of a stream (reservoir sampling).

Reference: Vitter, J. S. (1985). Random sampling with a reservoir.
ACM TOMS 11(1), Algorithm R.

Once the buffer is full, the t-th datum replaces a uniformly chosen slot
with probability k/t, which keeps every prefix element in the sample with
equal probability k/t.  Quantiles are read off the sorted buffer.
"""

from __future__ import annotations

import random
from bisect import bisect_left, insort

from .base import QuantileEstimator, require_finite
from ..histogram import check_quantile
from ..oracle import target_rank

__all__ = ["ReservoirEstimator"]


class ReservoirEstimator(QuantileEstimator):
    """Uniform random sample with a seeded, self-contained generator."""

    def __init__(self, capacity: int, seed: int = 0) -> None:
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self._k = int(capacity)
        self._seed = int(seed)
        self._rng = random.Random(self._seed)
        self._slots: list[float] = []
        self._sorted: list[float] = []  # slot contents kept in value order
        self._seen = 0

    def name(self) -> str:
        return "reservoir"

    def memory_footprint(self) -> int:
        return self._k

    @property
    def observed(self) -> int:
        return self._seen

    @property
    def sample(self) -> tuple[float, ...]:
        return tuple(self._slots)

    def observe(self, value: float) -> None:
        d = require_finite(value)
        self._seen += 1
        if len(self._slots) < self._k:
            self._slots.append(d)
            insort(self._sorted, d)
            return
        # Vitter's RANDOM()-based draw: uniform over 0 .. seen-1.
        j = int(self._rng.random() * self._seen)
        if j < self._k:
            old = self._slots[j]
            self._slots[j] = d
            del self._sorted[bisect_left(self._sorted, old)]
            insort(self._sorted, d)

    def estimate(self, q: float) -> float:
        q = check_quantile(q)
        if not self._sorted:
            raise ValueError("no data observed yet")
        return self._sorted[target_rank(q, len(self._sorted)) - 1]
