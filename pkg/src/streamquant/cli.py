"""Command-line client for the quantile estimation service.

The CLI builds service requests and writes the returned payloads to disk;
all stream generation, estimation and scoring happens inside the service.
By default each invocation talks to an in-process instance of the app over
an ASGI transport, so no server needs to be running; ``--server URL``
targets a live instance instead (stream file paths then resolve on the
server's filesystem).
"""

from __future__ import annotations

import asyncio
import sys
from pathlib import Path

import click
import httpx

SERVER_OPT = click.option(
    "--server",
    default=None,
    metavar="URL",
    help="Base URL of a running service; default runs the service in-process.",
)

_ALGORITHM_CHOICES = ("interpolated", "data-aligned", "p2", "reservoir", "uniform")
_DEFAULT_ALPHAS = (0.01, 0.05, 0.1)


async def _request_async(server: str | None, method: str, path: str, **kwargs) -> httpx.Response:
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.request(method, path, **kwargs)
    from .service.app import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport, base_url="http://streamquant.local", timeout=None
    ) as client:
        return await client.request(method, path, **kwargs)


def _request(server: str | None, method: str, path: str, **kwargs) -> httpx.Response:
    response = asyncio.run(_request_async(server, method, path, **kwargs))
    if response.status_code >= 400:
        detail = response.text
        try:
            payload = response.json()
            if isinstance(payload, dict) and "detail" in payload:
                detail = str(payload["detail"])
        except ValueError:
            pass
        raise click.ClickException(f"service error ({response.status_code}): {detail}")
    return response


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _stream_payload(synthetic: str | None, input_path: str | None, count: int, seed: int) -> dict:
    if (synthetic is None) == (input_path is None):
        raise click.UsageError("exactly one of --synthetic or --input is required")
    if input_path is not None:
        return {"kind": "file", "path": input_path}
    return {"kind": synthetic, "count": count, "seed": seed}


def _series_path(out: str, q: float, many: bool) -> str:
    if not many:
        return out
    p = Path(out)
    return str(p.with_name(f"{p.stem}_q{q:g}{p.suffix or '.csv'}"))


@click.group()
def main() -> None:
    """Bounded-memory running quantile estimation over data streams."""


@main.command()
@click.option("--kind", type=click.Choice(["normal", "mixture"]), default="normal",
              help="Stationary normal or non-stationary coin-flip mixture.")
@click.option("--count", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default="-", metavar="PATH", help="Output file ('-' for stdout).")
@SERVER_OPT
def generate(kind: str, count: int, seed: int, out: str, server: str | None) -> None:
    """Generate a synthetic stream file (one value per line)."""
    response = _request(
        server, "POST", "/generate", json={"kind": kind, "count": count, "seed": seed}
    )
    _write_text(out, response.text)
    if out != "-":
        click.echo(f"wrote {count} values to {out}")


def _run_options(fn):
    fn = click.option("--bins", type=int, default=100, show_default=True,
                      help="Bin budget for the histogram methods.")(fn)
    fn = click.option("--buffer", type=int, default=500, show_default=True,
                      help="Reservoir capacity.")(fn)
    fn = click.option("--quantile", "quantiles", type=float, multiple=True,
                      default=(0.95,), show_default=True, help="Target fraction (repeatable).")(fn)
    fn = click.option("--input", "input_path", default=None, metavar="PATH",
                      help="Stream file (one value per line, # comments).")(fn)
    fn = click.option("--synthetic", type=click.Choice(["normal", "mixture"]), default=None,
                      help="Generate the stream instead of reading a file.")(fn)
    fn = click.option("--count", type=int, default=100_000, show_default=True,
                      help="Synthetic stream length.")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True,
                      help="Seed for the stream and the reservoir.")(fn)
    fn = click.option("--alpha", "alphas", type=float, multiple=True,
                      default=_DEFAULT_ALPHAS, show_default=True,
                      help="Accuracy level for t(alpha) (repeatable).")(fn)
    fn = click.option("--stride", type=int, default=1, show_default=True,
                      help="Record estimate/truth every N steps.")(fn)
    return fn


@main.command(name="run")
@click.option("--algorithm", type=click.Choice(_ALGORITHM_CHOICES), required=True)
@_run_options
@click.option("--no-truth", is_flag=True, help="Skip the oracle; emit estimates only.")
@click.option("--out", required=True, metavar="PATH",
              help="Per-step CSV (with several quantiles: one file per q, suffixed _qQ).")
@click.option("--summary-out", default=None, metavar="PATH",
              help="Summary CSV path (default: OUT with a .summary.csv suffix).")
@SERVER_OPT
def run_cmd(
    algorithm: str,
    bins: int,
    buffer: int,
    quantiles: tuple[float, ...],
    input_path: str | None,
    synthetic: str | None,
    count: int,
    seed: int,
    alphas: tuple[float, ...],
    stride: int,
    no_truth: bool,
    out: str,
    summary_out: str | None,
    server: str | None,
) -> None:
    """Run one estimator over a stream; write per-step and summary CSVs."""
    payload = {
        "estimator": {"algorithm": algorithm, "bins": bins, "buffer": buffer, "seed": seed},
        "stream": _stream_payload(synthetic, input_path, count, seed),
        "quantiles": list(quantiles),
        "truth": not no_truth,
        "stride": stride,
        "alphas": list(alphas),
    }
    response = _request(server, "POST", "/runs", json=payload)
    body = response.json()
    many = len(body["series"]) > 1
    for entry in body["series"]:
        path = _series_path(out, entry["q"], many)
        _write_text(path, entry["csv"])
        click.echo(f"wrote per-step series for q={entry['q']:g} to {path}")
    if body["summary_csv"]:
        spath = summary_out or str(Path(out).with_suffix(".summary.csv"))
        _write_text(spath, body["summary_csv"])
        click.echo(f"wrote summary to {spath}")


@main.command(name="compare")
@click.option("--algorithm", "algorithms", type=click.Choice(_ALGORITHM_CHOICES),
              multiple=True, default=_ALGORITHM_CHOICES, show_default=True,
              help="Estimator to include (repeatable).")
@_run_options
@click.option("--out", required=True, metavar="PATH", help="Comparison table CSV.")
@SERVER_OPT
def compare_cmd(
    algorithms: tuple[str, ...],
    bins: int,
    buffer: int,
    quantiles: tuple[float, ...],
    input_path: str | None,
    synthetic: str | None,
    count: int,
    seed: int,
    alphas: tuple[float, ...],
    stride: int,
    out: str,
    server: str | None,
) -> None:
    """Run several estimators over one stream and tabulate the metrics."""
    if len(algorithms) < 2:
        raise click.UsageError("compare needs at least two --algorithm values")
    payload = {
        "estimators": [
            {"algorithm": a, "bins": bins, "buffer": buffer, "seed": seed} for a in algorithms
        ],
        "stream": _stream_payload(synthetic, input_path, count, seed),
        "quantiles": list(quantiles),
        "stride": stride,
        "alphas": list(alphas),
    }
    response = _request(server, "POST", "/compare", json=payload)
    body = response.json()
    _write_text(out, body["table_csv"])
    click.echo(body["table_text"], nl=False)
    if out != "-":
        click.echo(f"wrote comparison table to {out}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
