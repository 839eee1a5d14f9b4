"""FastAPI service wrapping the streaming quantile estimators.

Two kinds of surface:

* estimator sessions -- long-lived sketches living in server memory that
  clients feed with observation batches and query for quantiles;
* batch jobs -- ``/generate``, ``/runs`` and ``/compare`` execute a whole
  synthetic-stream evaluation server-side and return CSV payloads.

Sessions are single-writer state machines, so each one is guarded by its
own lock.
"""

from __future__ import annotations

import itertools
import threading

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse

from .. import __version__
from ..datagen import StreamSpec, format_stream, materialize
from ..estimators import make_estimator, needs_target_quantile
from ..harness import (
    RunConfig,
    compare,
    format_comparison_text,
    run,
    series_to_csv,
    summaries_to_csv,
    summarize,
)
from .schemas import (
    CompareRequest,
    CompareResponse,
    CreateEstimatorResponse,
    EstimatesResponse,
    EstimatorInfo,
    EstimatorSpec,
    GenerateRequest,
    ObservationsRequest,
    ObservationsResponse,
    QuantileEstimate,
    RunRequest,
    RunResponse,
    SeriesPayload,
    StreamModel,
    summary_model,
)

_STREAM_KINDS = {"normal": "stationary-normal", "mixture": "coin-mixture"}


def _stream_spec(model: StreamModel) -> StreamSpec:
    if model.kind == "file":
        return StreamSpec(kind="file", path=model.path)
    return StreamSpec(kind=_STREAM_KINDS[model.kind], count=model.count, seed=model.seed)


def _build_estimator(spec: EstimatorSpec):
    quantile = spec.quantile
    if needs_target_quantile(spec.algorithm) and quantile is None:
        quantile = 0.95
    return make_estimator(
        spec.algorithm,
        bins=spec.bins,
        buffer=spec.buffer,
        seed=spec.seed,
        quantile=quantile,
    )


class _Session:
    def __init__(self, session_id: str, estimator) -> None:
        self.session_id = session_id
        self.estimator = estimator
        self.lock = threading.Lock()

    def info(self) -> EstimatorInfo:
        est = self.estimator
        return EstimatorInfo(
            estimator_id=self.session_id,
            algorithm=est.name(),
            observed=est.observed,
            memory_footprint=est.memory_footprint(),
        )


def create_app() -> FastAPI:
    app = FastAPI(
        title="streamquant",
        version=__version__,
        description="Bounded-memory running quantile estimation over data streams",
    )
    sessions: dict[str, _Session] = {}
    session_ids = itertools.count(1)
    registry_lock = threading.Lock()

    def get_session(estimator_id: str) -> _Session:
        session = sessions.get(estimator_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no estimator {estimator_id!r}")
        return session

    @app.exception_handler(ValueError)
    async def value_error_handler(_, exc: ValueError):
        return PlainTextResponse(str(exc), status_code=400)

    @app.exception_handler(OSError)
    async def os_error_handler(_, exc: OSError):
        return PlainTextResponse(str(exc), status_code=400)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    # -- estimator sessions --------------------------------------------------

    @app.post("/estimators", response_model=CreateEstimatorResponse)
    def create_estimator(spec: EstimatorSpec) -> CreateEstimatorResponse:
        estimator = _build_estimator(spec)
        with registry_lock:
            session_id = f"est-{next(session_ids)}"
            sessions[session_id] = _Session(session_id, estimator)
        return CreateEstimatorResponse(
            estimator_id=session_id,
            algorithm=spec.algorithm,
            memory_footprint=estimator.memory_footprint(),
        )

    @app.get("/estimators", response_model=list[EstimatorInfo])
    def list_estimators() -> list[EstimatorInfo]:
        with registry_lock:
            return [session.info() for session in sessions.values()]

    @app.get("/estimators/{estimator_id}", response_model=EstimatorInfo)
    def estimator_info(estimator_id: str) -> EstimatorInfo:
        return get_session(estimator_id).info()

    @app.delete("/estimators/{estimator_id}")
    def delete_estimator(estimator_id: str) -> dict:
        with registry_lock:
            if sessions.pop(estimator_id, None) is None:
                raise HTTPException(status_code=404, detail=f"no estimator {estimator_id!r}")
        return {"deleted": estimator_id}

    @app.post("/estimators/{estimator_id}/observations", response_model=ObservationsResponse)
    def observe(estimator_id: str, payload: ObservationsRequest) -> ObservationsResponse:
        session = get_session(estimator_id)
        with session.lock:
            session.estimator.observe_many(payload.values)
            observed = session.estimator.observed
        return ObservationsResponse(estimator_id=estimator_id, observed=observed)

    @app.get("/estimators/{estimator_id}/quantiles", response_model=EstimatesResponse)
    def estimates(
        estimator_id: str, q: list[float] = Query(min_length=1)
    ) -> EstimatesResponse:
        session = get_session(estimator_id)
        with session.lock:
            values = [float(v) for v in session.estimator.estimate_many(q)]
            observed = session.estimator.observed
        return EstimatesResponse(
            estimator_id=estimator_id,
            observed=observed,
            estimates=[QuantileEstimate(q=qq, value=v) for qq, v in zip(q, values)],
        )

    # -- batch jobs ----------------------------------------------------------

    @app.post("/generate", response_class=PlainTextResponse)
    def generate(request: GenerateRequest) -> str:
        spec = _stream_spec(StreamModel(kind=request.kind, count=request.count, seed=request.seed))
        values = materialize(spec)
        header = f"kind={request.kind} count={request.count} seed={request.seed}"
        return format_stream(values, header=header)

    @app.post("/runs", response_model=RunResponse)
    def run_job(request: RunRequest) -> RunResponse:
        config = RunConfig(
            algorithm=request.estimator.algorithm,
            stream=_stream_spec(request.stream),
            quantiles=tuple(request.quantiles),
            bins=request.estimator.bins,
            buffer=request.estimator.buffer,
            seed=request.estimator.seed,
            truth=request.truth,
            stride=request.stride,
            alphas=tuple(request.alphas),
        )
        series = run(config)
        if request.truth:
            rows = [summarize(s, config.alphas) for s in series]
            summaries = [summary_model(r) for r in rows]
            summary_csv = summaries_to_csv(rows, config.alphas)
        else:
            summaries, summary_csv = [], ""
        return RunResponse(
            summaries=summaries,
            summary_csv=summary_csv,
            series=[SeriesPayload(q=s.q, csv=series_to_csv(s)) for s in series],
        )

    @app.post("/compare", response_model=CompareResponse)
    def compare_job(request: CompareRequest) -> CompareResponse:
        stream = _stream_spec(request.stream)
        configs = [
            RunConfig(
                algorithm=spec.algorithm,
                stream=stream,
                quantiles=tuple(request.quantiles),
                bins=spec.bins,
                buffer=spec.buffer,
                seed=spec.seed,
                truth=True,
                stride=request.stride,
                alphas=tuple(request.alphas),
            )
            for spec in request.estimators
        ]
        result = compare(configs)
        return CompareResponse(
            rows=[summary_model(r) for r in result.rows],
            table_csv=summaries_to_csv(result.rows, tuple(request.alphas)),
            table_text=format_comparison_text(result.rows, tuple(request.alphas)),
        )

    return app


app = create_app()
