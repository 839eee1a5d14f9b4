"""Request/response models for the quantile estimation service."""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, Field, model_validator

Algorithm = Literal["interpolated", "data-aligned", "p2", "reservoir", "uniform"]
StreamKind = Literal["normal", "mixture", "file"]


class EstimatorSpec(BaseModel):
    """Which estimator to build and how to size it."""

    algorithm: Algorithm
    bins: int = Field(default=100, ge=2, description="bin budget for histogram methods")
    buffer: int = Field(default=500, ge=1, description="reservoir capacity")
    seed: int = Field(default=0, description="reservoir RNG seed")
    quantile: float | None = Field(
        default=None, gt=0, lt=1, description="target fraction (p2 sessions only)"
    )


class StreamModel(BaseModel):
    """A synthetic stream (seeded) or a server-side stream file."""

    kind: StreamKind = "normal"
    count: int = Field(default=100_000, ge=1)
    seed: int = 0
    path: str | None = None

    @model_validator(mode="after")
    def _check_path(self) -> "StreamModel":
        if self.kind == "file" and not self.path:
            raise ValueError("file streams need a path")
        return self


class GenerateRequest(BaseModel):
    kind: Literal["normal", "mixture"] = "normal"
    count: int = Field(default=100_000, ge=1)
    seed: int = 0


class CreateEstimatorResponse(BaseModel):
    estimator_id: str
    algorithm: Algorithm
    memory_footprint: int


class EstimatorInfo(BaseModel):
    estimator_id: str
    algorithm: str
    observed: int
    memory_footprint: int


class ObservationsRequest(BaseModel):
    values: list[float] = Field(min_length=1)


class ObservationsResponse(BaseModel):
    estimator_id: str
    observed: int


class QuantileEstimate(BaseModel):
    q: float
    value: float


class EstimatesResponse(BaseModel):
    estimator_id: str
    observed: int
    estimates: list[QuantileEstimate]


class SummaryModel(BaseModel):
    algorithm: str
    memory: int
    q: float
    records: int
    skipped: int
    final_estimate: float
    mean_rel_error: float | None  # None when no record had positive truth
    linf_error: float
    t_alpha: dict[str, int]


class RunRequest(BaseModel):
    estimator: EstimatorSpec
    stream: StreamModel
    quantiles: list[float] = Field(default=[0.95])
    truth: bool = True
    stride: int = Field(default=1, ge=1)
    alphas: list[float] = Field(default=[0.01, 0.05, 0.1])


class SeriesPayload(BaseModel):
    q: float
    csv: str


class RunResponse(BaseModel):
    summaries: list[SummaryModel]
    summary_csv: str
    series: list[SeriesPayload]


class CompareRequest(BaseModel):
    estimators: list[EstimatorSpec] = Field(min_length=2)
    stream: StreamModel
    quantiles: list[float] = Field(default=[0.95])
    stride: int = Field(default=1, ge=1)
    alphas: list[float] = Field(default=[0.01, 0.05, 0.1])


class CompareResponse(BaseModel):
    rows: list[SummaryModel]
    table_csv: str
    table_text: str


def summary_model(row) -> SummaryModel:
    """Convert a harness SeriesSummary into its wire form (NaN-safe)."""
    mean_rel = row.mean_rel_error
    return SummaryModel(
        algorithm=row.algorithm,
        memory=row.memory,
        q=row.q,
        records=row.records,
        skipped=row.skipped,
        final_estimate=row.final_estimate,
        mean_rel_error=None if math.isnan(mean_rel) else mean_rel,
        linf_error=row.linf_error,
        t_alpha={repr(float(a)): t for a, t in row.t_alpha},
    )
