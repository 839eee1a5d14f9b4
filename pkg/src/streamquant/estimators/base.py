"""Common estimator interface and factory.

Every streaming estimator is a single-writer state machine exposing
``observe(value)``, ``estimate(q)``, ``name()`` and ``memory_footprint()``
(in buffer slots / bins).  Instances are not internally synchronized;
concurrent ``observe`` calls on one instance are a contract violation.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np

__all__ = ["QuantileEstimator", "require_finite"]


def require_finite(value: float) -> float:
    """Coerce to float and reject NaN/inf observations."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"observation must be finite, got {value}")
    return value


class QuantileEstimator(ABC):
    """Base class for bounded-memory streaming quantile estimators."""

    #: True when one instance tracks a single target fraction fixed at
    #: construction (quantile queries for other fractions are rejected).
    requires_target_quantile: bool = False

    @abstractmethod
    def observe(self, value: float) -> None:
        """Feed one datum into the sketch."""

    @abstractmethod
    def estimate(self, q: float) -> float:
        """Current estimate of the q-quantile of everything observed."""

    @abstractmethod
    def name(self) -> str:
        """Short algorithm identifier (matches the CLI choices)."""

    @abstractmethod
    def memory_footprint(self) -> int:
        """Working-memory size in bins / buffer slots."""

    @property
    @abstractmethod
    def observed(self) -> int:
        """Number of data observed so far."""

    def observe_many(self, values) -> None:
        for v in values:
            self.observe(v)

    def estimate_many(self, qs) -> np.ndarray:
        return np.array([self.estimate(q) for q in qs], dtype=float)
