"""Bounded-memory streaming quantile estimators and their factory."""

from __future__ import annotations

from .base import QuantileEstimator
from .data_aligned import (
    DataAlignedEstimator,
    best_merge,
    best_merge_exhaustive,
    insert_temporary,
    merge_gains,
)
from .interpolated import InterpolatedEstimator
from .p2 import P2Estimator
from .reservoir import ReservoirEstimator
from .uniform import UniformHistogramEstimator

__all__ = [
    "ALGORITHMS",
    "QuantileEstimator",
    "InterpolatedEstimator",
    "DataAlignedEstimator",
    "P2Estimator",
    "ReservoirEstimator",
    "UniformHistogramEstimator",
    "make_estimator",
    "needs_target_quantile",
    "best_merge",
    "best_merge_exhaustive",
    "insert_temporary",
    "merge_gains",
]

ALGORITHMS = ("interpolated", "data-aligned", "p2", "reservoir", "uniform")


def needs_target_quantile(algorithm: str) -> bool:
    """Whether one instance of the algorithm serves a single fixed fraction."""
    return algorithm == "p2"


def make_estimator(
    algorithm: str,
    *,
    bins: int = 100,
    buffer: int = 500,
    seed: int = 0,
    quantile: float | None = None,
) -> QuantileEstimator:
    """Build an estimator by its CLI identifier.

    ``bins`` sizes the histogram methods, ``buffer`` the reservoir, ``seed``
    the reservoir's generator, and ``quantile`` the P-squared target (which
    tracks exactly one fraction per instance).
    """
    if algorithm == "interpolated":
        return InterpolatedEstimator(bins=bins)
    if algorithm == "data-aligned":
        return DataAlignedEstimator(bins=bins)
    if algorithm == "p2":
        if quantile is None:
            raise ValueError("the p2 algorithm needs a target quantile")
        return P2Estimator(quantile=quantile)
    if algorithm == "reservoir":
        return ReservoirEstimator(capacity=buffer, seed=seed)
    if algorithm == "uniform":
        return UniformHistogramEstimator(bins=bins)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
