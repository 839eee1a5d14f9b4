"""Histogram value types and quantile queries over piecewise-uniform densities.

Two sketch representations are shared by the streaming estimators:

* :class:`CountedHistogram` -- ascending upper bin boundaries plus a
  real-valued mass per bin.  The density is uniform within each bin.
* :class:`EquiprobableHistogram` -- ascending boundaries only; every bin
  implicitly carries an equal share of the observed mass, which is the
  maximum-entropy configuration for a fixed bin count.

Bins are right-closed: bin ``j`` covers ``(b[j-1], b[j]]`` with ``b[0]``
given by ``lower_bound``.  All operations here are pure functions of their
inputs; the types are plain values and safe to share between threads.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CountedHistogram",
    "EquiprobableHistogram",
    "entropy",
    "mass_log2_mass",
    "merge_pair",
    "quantile_counted",
    "quantile_counted_many",
    "quantile_equiprobable",
    "quantile_equiprobable_many",
    "check_quantile",
    "shifted_lower_bound",
]


def check_quantile(q: float) -> float:
    """Validate a quantile fraction; must lie strictly inside (0, 1)."""
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile fraction must be in (0, 1), got {q}")
    return q


def shifted_lower_bound(value: float) -> float:
    """A lower bin edge strictly below ``value`` by an epsilon-scaled margin.

    Used by the estimators to re-anchor the implicit lower edge when a datum
    at or below the current edge arrives (the default edge of 0 assumes
    positive data).
    """
    return value - max(abs(value), 1.0) * 8.0 * sys.float_info.epsilon


def mass_log2_mass(x: np.ndarray) -> np.ndarray:
    """Elementwise ``x * log2(x)`` with the ``0 * log2(0) == 0`` convention."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0.0, x, 1.0)
    return x * np.log2(safe)


def entropy(counts) -> float:
    """Shannon entropy, in bits, of a histogram's normalized bin counts.

    Zero bins contribute nothing.  The result lies in ``[0, log2(n)]`` and
    reaches the upper end exactly when all nonzero counts are equal.

    Raises:
        ValueError: empty counts, negative or non-finite entries, or no
            positive mass at all.
    """
    c = np.asarray(counts, dtype=float)
    if c.size == 0:
        raise ValueError("entropy requires at least one count")
    if not np.all(np.isfinite(c)) or np.any(c < 0.0):
        raise ValueError("counts must be finite and non-negative")
    total = float(np.sum(c))
    if total <= 0.0:
        raise ValueError("entropy requires at least one positive count")
    # fsum keeps the result independent of term order, so equal-mass
    # configurations compare exactly equal.
    h = -math.fsum(mass_log2_mass(c / total).tolist())
    return h if h > 0.0 else 0.0


def _as_boundary_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class CountedHistogram:
    """Ascending upper bin boundaries plus a non-negative mass per bin.

    Counts are real-valued: splitting a bin at an interior point produces
    fractional masses.  ``lower_bound`` is the implicit lower edge of the
    first bin and must sit strictly below the first boundary.
    """

    boundaries: np.ndarray
    counts: np.ndarray
    lower_bound: float = 0.0

    def __post_init__(self) -> None:
        b = _as_boundary_array(self.boundaries, "boundaries")
        c = np.asarray(self.counts, dtype=float)
        if c.shape != b.shape:
            raise ValueError("boundaries and counts must have equal length")
        if np.any(np.diff(b) <= 0.0):
            raise ValueError("boundaries must be strictly increasing")
        if not np.all(np.isfinite(c)) or np.any(c < 0.0):
            raise ValueError("counts must be finite and non-negative")
        if not self.lower_bound < b[0]:
            raise ValueError("lower_bound must lie strictly below the first boundary")
        object.__setattr__(self, "boundaries", b)
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "lower_bound", float(self.lower_bound))

    @property
    def nbins(self) -> int:
        return int(self.boundaries.size)

    @property
    def total(self) -> float:
        return float(np.sum(self.counts))


@dataclass(frozen=True)
class EquiprobableHistogram:
    """Ascending boundaries whose bins each hold ``total_count / n`` mass."""

    boundaries: np.ndarray
    total_count: int
    lower_bound: float = 0.0

    def __post_init__(self) -> None:
        b = _as_boundary_array(self.boundaries, "boundaries")
        if np.any(np.diff(b) <= 0.0):
            raise ValueError("boundaries must be strictly increasing")
        if self.total_count < 0:
            raise ValueError("total_count must be non-negative")
        if not self.lower_bound < b[0]:
            raise ValueError("lower_bound must lie strictly below the first boundary")
        object.__setattr__(self, "boundaries", b)
        object.__setattr__(self, "total_count", int(self.total_count))
        object.__setattr__(self, "lower_bound", float(self.lower_bound))

    @property
    def nbins(self) -> int:
        return int(self.boundaries.size)


def counted_quantiles(
    boundaries: np.ndarray,
    counts: np.ndarray,
    lower_bound: float,
    qs: np.ndarray,
    cum: np.ndarray | None = None,
) -> np.ndarray:
    """Invert a counted histogram's mass CDF at the fractions ``qs``.

    Low-level array form shared with the estimators' hot paths; ``cum`` may
    pass a precomputed ``np.cumsum(counts)``.  Quantile fractions are assumed
    validated.  The crossing bin is interpolated linearly.
    """
    if cum is None:
        cum = np.cumsum(counts)
    total = float(cum[-1])
    if total <= 0.0:
        raise ValueError("histogram holds no mass")
    targets = np.minimum(np.asarray(qs, dtype=float) * total, total)
    j = np.minimum(np.searchsorted(cum, targets, side="left"), counts.size - 1)
    # np.where evaluates both branches; boundaries[j-1] at j == 0 is a
    # discarded wrap-around read.
    left = np.where(j > 0, boundaries[j - 1], lower_bound)
    before = np.where(j > 0, cum[j - 1], 0.0)
    # counts[j] > 0 wherever the crossing lands, by searchsorted("left").
    return left + (targets - before) / counts[j] * (boundaries[j] - left)


def quantile_counted(hist: CountedHistogram, q: float) -> float:
    """Value below which a fraction ``q`` of the histogram's mass lies."""
    q = check_quantile(q)
    return float(counted_quantiles(hist.boundaries, hist.counts, hist.lower_bound, np.array([q]))[0])


def quantile_counted_many(hist: CountedHistogram, qs) -> np.ndarray:
    """Vector form of :func:`quantile_counted`."""
    qa = np.asarray([check_quantile(q) for q in np.asarray(qs, dtype=float)])
    return counted_quantiles(hist.boundaries, hist.counts, hist.lower_bound, qa)


def equiprobable_quantiles(boundaries: np.ndarray, lower_bound: float, qs: np.ndarray) -> np.ndarray:
    """Invert the equiprobable-bin CDF (0 at the lower edge, j/n at b[j])."""
    n = boundaries.size
    knots_x = np.empty(n + 1)
    knots_x[0] = lower_bound
    knots_x[1:] = boundaries
    knots_y = np.arange(n + 1) / n
    return np.interp(np.asarray(qs, dtype=float), knots_y, knots_x)


def quantile_equiprobable(hist: EquiprobableHistogram, q: float) -> float:
    """Quantile of an equiprobable histogram's piecewise-linear CDF.

    The CDF is 0 at ``lower_bound``, ``j / n`` at the j-th boundary and
    linear inside each bin, so boundary fractions invert exactly back to
    their boundaries.
    """
    q = check_quantile(q)
    if hist.total_count < 1:
        raise ValueError("histogram has observed no data")
    return float(equiprobable_quantiles(hist.boundaries, hist.lower_bound, np.array([q]))[0])


def quantile_equiprobable_many(hist: EquiprobableHistogram, qs) -> np.ndarray:
    """Vector form of :func:`quantile_equiprobable`."""
    if hist.total_count < 1:
        raise ValueError("histogram has observed no data")
    qa = np.asarray([check_quantile(q) for q in np.asarray(qs, dtype=float)])
    return equiprobable_quantiles(hist.boundaries, hist.lower_bound, qa)


def merge_pair(hist: CountedHistogram, k: int) -> CountedHistogram:
    """Merge bins ``k`` and ``k + 1`` (1-based) into one bin.

    The merged bin keeps the upper boundary of bin ``k + 1`` and the sum of
    the two counts; total mass is unchanged.

    Raises:
        IndexError: ``k`` outside ``1 .. nbins - 1``.
    """
    n = hist.nbins
    if not 1 <= k < n:
        raise IndexError(f"merge index {k} out of range for {n} bins")
    counts = hist.counts.copy()
    counts[k] = counts[k - 1] + counts[k]
    return CountedHistogram(
        boundaries=np.delete(hist.boundaries, k - 1),
        counts=np.delete(counts, k - 1),
        lower_bound=hist.lower_bound,
    )
