"""Interpolated equiprobable-bin estimator."""

import numpy as np
import pytest

from streamquant import InterpolatedEstimator
from streamquant.datagen import gen_mixture
from streamquant.estimators.interpolated import post_arrival_mass_bounds
from streamquant.oracle import ExactQuantileStore


def feed(est, values):
    for v in values:
        est.observe(v)
    return est


class TestWarmUp:
    def test_unique_values_become_boundaries(self):
        est = feed(InterpolatedEstimator(bins=3), [1, 2, 5])
        assert est.boundaries.tolist() == [1, 2, 5]
        assert est.observed == 3
        assert est.is_warm_up

    def test_duplicates_add_no_boundary(self):
        est = feed(InterpolatedEstimator(bins=3), [2, 2, 2, 5])
        assert est.boundaries.tolist() == [2, 5]
        assert est.observed == 4
        assert est.is_warm_up

    def test_exact_during_warm_up(self):
        est = feed(InterpolatedEstimator(bins=8), [1, 2, 3])
        assert est.estimate(0.5) == 2

    def test_exact_vs_oracle_with_duplicates(self):
        rng = np.random.default_rng(0)
        pool = rng.normal(5, 2, 16)
        est = InterpolatedEstimator(bins=16)
        store = ExactQuantileStore()
        for v in pool[rng.integers(0, 16, 200)].tolist():
            est.observe(v)
            store.observe(v)
            assert est.is_warm_up
            for q in rng.uniform(0.001, 0.999, 5):
                assert est.estimate(float(q)) == store.quantile(float(q))

    def test_steady_starts_at_capacity_plus_one_unique(self):
        est = feed(InterpolatedEstimator(bins=3), [1, 2, 3])
        assert est.is_warm_up
        est.observe(4.0)
        assert not est.is_warm_up
        assert est.boundaries.size == 3


class TestSteadyUpdate:
    def test_interior_datum_worked_case(self):
        # mass knots (0,0),(2,1),(3,1.5)+unit step,(4,3); level 1.5 inverts to 3
        est = feed(InterpolatedEstimator(bins=2), [2, 4])
        est.observe(3.0)
        assert est.boundaries.tolist() == [3.0, 4.0]
        assert est.observed == 3

    def test_datum_above_top_extends_range(self):
        est = feed(InterpolatedEstimator(bins=2), [2, 4])
        est.observe(10.0)
        assert est.boundaries.tolist() == [3.0, 10.0]

    def test_estimate_after_update(self):
        est = feed(InterpolatedEstimator(bins=2), [2, 4])
        est.observe(3.0)
        assert est.estimate(0.95) == pytest.approx(3.9, abs=1e-12)

    def test_estimate_at_boundary_fraction(self):
        est = InterpolatedEstimator(bins=4)
        est._boundaries = np.array([1.0, 2.0, 3.0, 4.0])
        est._observed = 4
        assert est.estimate(0.75) == 3.0

    def test_top_boundary_never_shrinks(self):
        rng = np.random.default_rng(1)
        est = InterpolatedEstimator(bins=16)
        running_max = -np.inf
        for v in rng.lognormal(0, 1, 3000).tolist():
            est.observe(v)
            running_max = max(running_max, v)
            assert est.boundaries[-1] >= running_max
            if not est.is_warm_up:
                assert est.estimate(0.999) <= est.boundaries[-1]

    def test_boundaries_strictly_increasing_100k_updates(self):
        # Mixed continuous draws and exact repeats of earlier values.
        rng = np.random.default_rng(2)
        est = InterpolatedEstimator(bins=32)
        pool = rng.normal(10, 5, 64).tolist()
        n = 100_000
        fresh = rng.normal(10, 5, n)
        reuse = rng.random(n) < 0.3
        picks = rng.integers(0, 64, n)
        for i in range(n):
            est.observe(pool[picks[i]] if reuse[i] else float(fresh[i]))
            b = est.boundaries
            if b.size > 1 and not np.all(np.diff(b) > 0):
                raise AssertionError(f"boundaries not strictly increasing at step {i}")

    def test_equiprobability_audit(self):
        est = InterpolatedEstimator(bins=50)
        worst = 0.0
        for d in gen_mixture(20_000, seed=9).tolist():
            if est.is_warm_up:
                est.observe(d)
                continue
            before, lb, total = est.boundaries, est.lower_bound, est.observed
            est.observe(d)
            low, high = post_arrival_mass_bounds(before, lb, total, d, est.boundaries)
            target = (total + 1) / 50
            dev = np.maximum(np.maximum(low - target, target - high), 0.0).max()
            worst = max(worst, float(dev) / (total + 1))
        assert worst <= 1e-9

    def test_monotone_estimates_every_step(self):
        rng = np.random.default_rng(3)
        est = InterpolatedEstimator(bins=8)
        qs = np.sort(rng.uniform(0.01, 0.99, 50))
        for v in rng.normal(0, 3, 500).tolist():
            est.observe(v)
            vals = est.estimate_many(qs)
            assert np.all(np.diff(vals) >= -1e-12)

    def test_negative_data_resets_lower_bound(self):
        est = InterpolatedEstimator(bins=4)
        for v in [-5.0, -2.0, 1.0, 3.0, 0.5]:
            est.observe(v)
        assert est.lower_bound < -5.0
        assert est.estimate(0.01) > est.lower_bound


class TestContracts:
    def test_rejects_non_finite(self):
        est = InterpolatedEstimator(bins=4)
        for bad in (float("nan"), float("inf"), -float("inf")):
            with pytest.raises(ValueError):
                est.observe(bad)

    def test_estimate_requires_data(self):
        with pytest.raises(ValueError):
            InterpolatedEstimator(bins=4).estimate(0.5)

    def test_interface(self):
        est = InterpolatedEstimator(bins=7)
        assert est.name() == "interpolated"
        assert est.memory_footprint() == 7

    def test_histogram_value_object(self):
        est = feed(InterpolatedEstimator(bins=2), [2, 4, 3])
        h = est.histogram
        assert h.total_count == 3
        assert h.boundaries.tolist() == est.boundaries.tolist()
        with pytest.raises(ValueError):
            _ = InterpolatedEstimator(bins=4).histogram
