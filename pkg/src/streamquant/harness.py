"""Evaluation harness: run estimators over streams and score them.

A run feeds every datum to an estimator (and, when enabled, to the exact
oracle), records the estimate and the true quantile every ``stride`` steps,
and reduces the series to the evaluation metrics: mean relative error,
absolute L-infinity error, and the time-until-accuracy t(alpha) -- the
stream index after which the relative error permanently stays at or below
alpha.

Everything is a pure function of the configuration; all randomness is
seeded, so repeated runs produce byte-identical CSV output.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .datagen import StreamSpec, materialize
from .estimators import make_estimator, needs_target_quantile
from .histogram import check_quantile
from .oracle import ExactQuantileStore

__all__ = [
    "RunConfig",
    "EvalSeries",
    "SeriesSummary",
    "Comparison",
    "run",
    "compute_truth",
    "time_until_accuracy",
    "summarize",
    "compare",
    "series_to_csv",
    "write_series_csv",
    "read_series_csv",
    "summaries_to_csv",
    "write_summaries_csv",
    "format_comparison_text",
]

DEFAULT_ALPHAS = (0.01, 0.05, 0.1)


@dataclass(frozen=True)
class RunConfig:
    """One estimator, one stream, a set of quantile targets."""

    algorithm: str
    stream: StreamSpec
    quantiles: tuple[float, ...] = (0.95,)
    bins: int = 100
    buffer: int = 500
    seed: int = 0
    truth: bool = True
    stride: int = 1
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    bins_out: str | None = None  # per-step (boundaries, counts) dump, if supported

    def __post_init__(self) -> None:
        if self.stride < 1:
            raise ValueError("stride must be at least 1")
        if not self.quantiles:
            raise ValueError("at least one quantile required")
        for q in self.quantiles:
            check_quantile(q)
        for a in self.alphas:
            if a <= 0:
                raise ValueError("alphas must be positive")


@dataclass
class EvalSeries:
    """Recorded (estimate, truth) pairs for one estimator and one fraction."""

    algorithm: str
    q: float
    memory: int
    indices: np.ndarray  # 1-based stream step of each record
    estimates: np.ndarray
    truths: np.ndarray | None
    rel_errors: np.ndarray | None  # NaN where truth <= 0 (relative error undefined)
    skipped: int  # number of records with truth <= 0


@dataclass(frozen=True)
class SeriesSummary:
    algorithm: str
    memory: int
    q: float
    records: int
    skipped: int
    final_estimate: float
    mean_rel_error: float
    linf_error: float
    t_alpha: tuple[tuple[float, int], ...]


@dataclass(frozen=True)
class Comparison:
    rows: tuple[SeriesSummary, ...]
    series: tuple[EvalSeries, ...]


def _relative_errors(estimates: np.ndarray, truths: np.ndarray) -> tuple[np.ndarray, int]:
    rel = np.full(truths.shape, np.nan)
    positive = truths > 0
    rel[positive] = np.abs(estimates[positive] - truths[positive]) / truths[positive]
    return rel, int(truths.size - np.count_nonzero(positive))


def compute_truth(values: np.ndarray, quantiles, stride: int = 1) -> np.ndarray:
    """Ground-truth quantile series: one row per record, one column per q."""
    qs = [check_quantile(q) for q in quantiles]
    store = ExactQuantileStore()
    n_records = len(values) // stride
    out = np.empty((n_records, len(qs)))
    row = 0
    for i, d in enumerate(values.tolist(), 1):
        store.observe(d)
        if i % stride == 0:
            out[row] = store.quantiles(qs)
            row += 1
    return out


def run(
    config: RunConfig,
    *,
    values: np.ndarray | None = None,
    truth_matrix: np.ndarray | None = None,
) -> list[EvalSeries]:
    """Feed the stream through the configured estimator; one series per q.

    ``values`` and ``truth_matrix`` let a caller (``compare``) share one
    materialized stream and one oracle pass across several estimators.
    """
    if values is None:
        values = materialize(config.stream)
    qs = list(config.quantiles)
    stride = config.stride
    n_records = len(values) // stride

    per_q = needs_target_quantile(config.algorithm)
    if per_q:
        estimators = [
            make_estimator(
                config.algorithm,
                bins=config.bins,
                buffer=config.buffer,
                seed=config.seed,
                quantile=q,
            )
            for q in qs
        ]
    else:
        estimators = [
            make_estimator(
                config.algorithm, bins=config.bins, buffer=config.buffer, seed=config.seed
            )
        ]
    memory = estimators[0].memory_footprint()

    run_oracle = config.truth and truth_matrix is None
    store = ExactQuantileStore() if run_oracle else None
    est_matrix = np.empty((n_records, len(qs)))
    tru_matrix = np.empty((n_records, len(qs))) if run_oracle else None
    qs_array = np.asarray(qs)
    bins_rows: list[str] | None = [] if config.bins_out else None

    row = 0
    i = 0
    try:
        for i, d in enumerate(values.tolist(), 1):
            if per_q:
                for est in estimators:
                    est.observe(d)
            else:
                estimators[0].observe(d)
            if store is not None:
                store.observe(d)
            if i % stride == 0:
                if per_q:
                    for col, (est, q) in enumerate(zip(estimators, qs)):
                        est_matrix[row, col] = est.estimate(q)
                else:
                    est_matrix[row] = estimators[0].estimate_many(qs_array)
                if store is not None:
                    tru_matrix[row] = store.quantiles(qs)
                if bins_rows is not None and hasattr(estimators[0], "snapshot"):
                    b, c = estimators[0].snapshot()
                    bins_rows.append(
                        f"{i},{';'.join(repr(float(x)) for x in b)},"
                        f"{';'.join(repr(float(x)) for x in c)}"
                    )
                row += 1
    except ValueError as exc:
        raise ValueError(f"step {i}: {exc}") from exc

    if config.truth and truth_matrix is not None:
        tru_matrix = truth_matrix

    if bins_rows is not None:
        with open(config.bins_out, "w", encoding="utf-8") as fh:
            fh.write("index,boundaries,counts\n")
            fh.write("\n".join(bins_rows))
            if bins_rows:
                fh.write("\n")

    indices = np.arange(1, n_records + 1, dtype=np.int64) * stride
    series = []
    for col, q in enumerate(qs):
        estimates = est_matrix[:, col].copy()
        if config.truth:
            truths = tru_matrix[:, col].copy()
            rel, skipped = _relative_errors(estimates, truths)
        else:
            truths, rel, skipped = None, None, 0
        series.append(
            EvalSeries(
                algorithm=config.algorithm,
                q=q,
                memory=memory,
                indices=indices.copy(),
                estimates=estimates,
                truths=truths,
                rel_errors=rel,
                skipped=skipped,
            )
        )
    return series


def time_until_accuracy(series: EvalSeries, alpha: float) -> int:
    """Stream index of the last record whose relative error exceeds alpha.

    0 when the error never exceeds alpha; records with undefined relative
    error (truth <= 0) are ignored.  When even the last record is above
    alpha, that last index is returned: accuracy was never reached for good.
    """
    if series.truths is None or series.rel_errors is None:
        raise ValueError("series has no truth values")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    rel = series.rel_errors
    over = ~np.isnan(rel) & (rel > alpha)
    return int(series.indices[over][-1]) if over.any() else 0


def summarize(series: EvalSeries, alphas=DEFAULT_ALPHAS) -> SeriesSummary:
    """Reduce a series to mean relative error, L-infinity error and t(alpha)."""
    if series.indices.size == 0:
        raise ValueError("series is empty")
    if series.truths is None:
        raise ValueError("series has no truth values")
    rel = series.rel_errors
    valid = ~np.isnan(rel)
    mean_rel = float(np.mean(rel[valid])) if valid.any() else float("nan")
    linf = float(np.max(np.abs(series.estimates - series.truths)))
    return SeriesSummary(
        algorithm=series.algorithm,
        memory=series.memory,
        q=series.q,
        records=int(series.indices.size),
        skipped=series.skipped,
        final_estimate=float(series.estimates[-1]),
        mean_rel_error=mean_rel,
        linf_error=linf,
        t_alpha=tuple((float(a), time_until_accuracy(series, a)) for a in alphas),
    )


def compare(configs) -> Comparison:
    """Run several configs over the same stream and tabulate the summaries.

    All configs must agree on stream, quantiles, stride, truth and alphas
    (they may differ only in the estimator and its parameters); the stream
    is materialized once and the oracle pass is shared.
    """
    configs = list(configs)
    if len(configs) < 2:
        raise ValueError("compare needs at least two run configs")
    base = configs[0]
    for cfg in configs[1:]:
        if (
            cfg.stream != base.stream
            or cfg.quantiles != base.quantiles
            or cfg.stride != base.stride
            or cfg.truth != base.truth
            or cfg.alphas != base.alphas
        ):
            raise ValueError(
                "compare requires configs sharing stream, quantiles, stride, truth and alphas"
            )
    values = materialize(base.stream)
    truth_matrix = compute_truth(values, base.quantiles, base.stride) if base.truth else None
    rows: list[SeriesSummary] = []
    all_series: list[EvalSeries] = []
    for cfg in configs:
        for series in run(cfg, values=values, truth_matrix=truth_matrix):
            all_series.append(series)
            rows.append(summarize(series, cfg.alphas))
    return Comparison(rows=tuple(rows), series=tuple(all_series))


# -- CSV emission ------------------------------------------------------------


def series_to_csv(series: EvalSeries) -> str:
    """Per-step CSV: ``index,estimate,truth,rel_error``.

    Floats are written with repr and re-parse to identical values.  The
    truth and rel_error fields are empty when truth was not computed, and
    rel_error is empty on records where truth <= 0.
    """
    buf = io.StringIO()
    buf.write("index,estimate,truth,rel_error\n")
    has_truth = series.truths is not None
    for row in range(series.indices.size):
        idx = series.indices[row]
        est = repr(float(series.estimates[row]))
        if has_truth:
            tru = repr(float(series.truths[row]))
            rel_val = series.rel_errors[row]
            rel = "" if np.isnan(rel_val) else repr(float(rel_val))
        else:
            tru = rel = ""
        buf.write(f"{idx},{est},{tru},{rel}\n")
    return buf.getvalue()


def write_series_csv(series: EvalSeries, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(series_to_csv(series))


def read_series_csv(path) -> EvalSeries:
    """Parse a per-step CSV back into a series.

    The CSV stores only the numeric payload; algorithm/q/memory metadata are
    not part of the format and come back blank.
    """
    indices: list[int] = []
    estimates: list[float] = []
    truths: list[float] = []
    rels: list[float] = []
    has_truth = False
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "index,estimate,truth,rel_error":
            raise ValueError(f"{path}: unexpected header {header!r}")
        for lineno, line in enumerate(fh, 2):
            text = line.strip()
            if not text:
                continue
            parts = text.split(",")
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields")
            indices.append(int(parts[0]))
            estimates.append(float(parts[1]))
            if parts[2]:
                has_truth = True
                truths.append(float(parts[2]))
                rels.append(float(parts[3]) if parts[3] else float("nan"))
    truth_arr = np.asarray(truths) if has_truth else None
    rel_arr = np.asarray(rels) if has_truth else None
    skipped = int(np.isnan(rel_arr).sum()) if rel_arr is not None else 0
    return EvalSeries(
        algorithm="",
        q=float("nan"),
        memory=0,
        indices=np.asarray(indices, dtype=np.int64),
        estimates=np.asarray(estimates),
        truths=truth_arr,
        rel_errors=rel_arr,
        skipped=skipped,
    )


def _alpha_columns(alphas) -> list[str]:
    return [f"t({repr(float(a))})" for a in alphas]


def _summary_fields(row: SeriesSummary) -> list[str]:
    return [
        row.algorithm,
        str(row.memory),
        repr(float(row.q)),
        repr(row.final_estimate),
        repr(row.mean_rel_error),
        repr(row.linf_error),
        *[str(t) for _, t in row.t_alpha],
        str(row.records),
        str(row.skipped),
    ]


def summaries_to_csv(rows, alphas=DEFAULT_ALPHAS) -> str:
    """Summary/comparison CSV: one row per (estimator, quantile)."""
    header = [
        "algorithm",
        "memory",
        "q",
        "final_estimate",
        "mean_rel_error",
        "linf_error",
        *_alpha_columns(alphas),
        "records",
        "skipped",
    ]
    lines = [",".join(header)]
    lines += [",".join(_summary_fields(row)) for row in rows]
    return "\n".join(lines) + "\n"


def write_summaries_csv(rows, path, alphas=DEFAULT_ALPHAS) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(summaries_to_csv(rows, alphas))


def format_comparison_text(rows, alphas=DEFAULT_ALPHAS) -> str:
    """Human-readable aligned table of summary rows."""
    header = [
        "algorithm",
        "memory",
        "q",
        "final",
        "mean_rel",
        "linf",
        *_alpha_columns(alphas),
        "records",
        "skipped",
    ]
    body = []
    for row in rows:
        body.append(
            [
                row.algorithm,
                str(row.memory),
                f"{row.q:g}",
                f"{row.final_estimate:.6g}",
                f"{row.mean_rel_error:.4%}" if np.isfinite(row.mean_rel_error) else "n/a",
                f"{row.linf_error:.6g}",
                *[str(t) for _, t in row.t_alpha],
                str(row.records),
                str(row.skipped),
            ]
        )
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(header)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*["-" * w for w in widths])]
    lines += [fmt.format(*r) for r in body]
    return "\n".join(lines) + "\n"
