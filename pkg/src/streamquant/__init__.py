"""Bounded-memory running quantile estimation for non-stationary streams.

Two maximum-entropy histogram sketches (interpolated equiprobable bins and
data-aligned bins), three literature baselines (P-squared, reservoir sample,
uniform adjustable histogram), an exact unbounded-memory oracle, seeded
synthetic stream generators, and an evaluation harness with CSV output.
"""

__version__ = "0.1.0"

from .datagen import StreamSpec, gen_mixture, gen_stationary, inject_extremes, read_stream
from .estimators import (
    ALGORITHMS,
    DataAlignedEstimator,
    InterpolatedEstimator,
    P2Estimator,
    QuantileEstimator,
    ReservoirEstimator,
    UniformHistogramEstimator,
    make_estimator,
)
from .harness import (
    Comparison,
    EvalSeries,
    RunConfig,
    SeriesSummary,
    compare,
    run,
    summarize,
    time_until_accuracy,
)
from .histogram import (
    CountedHistogram,
    EquiprobableHistogram,
    entropy,
    merge_pair,
    quantile_counted,
    quantile_equiprobable,
)
from .oracle import ExactQuantileStore, target_rank

__all__ = [
    "__version__",
    "ALGORITHMS",
    "CountedHistogram",
    "EquiprobableHistogram",
    "entropy",
    "merge_pair",
    "quantile_counted",
    "quantile_equiprobable",
    "ExactQuantileStore",
    "target_rank",
    "QuantileEstimator",
    "InterpolatedEstimator",
    "DataAlignedEstimator",
    "P2Estimator",
    "ReservoirEstimator",
    "UniformHistogramEstimator",
    "make_estimator",
    "StreamSpec",
    "gen_stationary",
    "gen_mixture",
    "read_stream",
    "inject_extremes",
    "RunConfig",
    "EvalSeries",
    "SeriesSummary",
    "Comparison",
    "run",
    "compare",
    "summarize",
    "time_until_accuracy",
]
