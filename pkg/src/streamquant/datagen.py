"""Synthetic stream generators and plain-text stream file I/O.

Generators are pure functions of (seed, parameters): uniform deviates come
from the counter-based Philox generator and are mapped to normals through
the inverse-CDF (probit) transform, so identical streams reproduce across
runs and platforms.

Stream files hold one numeric value per line; lines starting with ``#`` are
comments.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox
from scipy.special import ndtri

__all__ = [
    "StreamSpec",
    "gen_stationary",
    "gen_mixture",
    "read_stream",
    "write_stream",
    "materialize",
    "inject_extremes",
    "DEFAULT_NORMAL",
    "DEFAULT_MIXTURE",
]

DEFAULT_NORMAL = ((5.0, 1.0),)
DEFAULT_MIXTURE = ((5.0, 1.0), (10.0, 4.0))

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class StreamSpec:
    """Source of one data stream: a synthetic generator or a file.

    ``components`` holds (mean, variance) pairs: one for the stationary
    normal, two for the coin mixture.
    """

    kind: str  # "stationary-normal" | "coin-mixture" | "file"
    count: int = 0
    seed: int = 0
    components: tuple[tuple[float, float], ...] = ()
    path: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "file":
            if not self.path:
                raise ValueError("file streams need a path")
            return
        if self.kind not in ("stationary-normal", "coin-mixture"):
            raise ValueError(f"unknown stream kind {self.kind!r}")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        for _, variance in self.components:
            if variance <= 0:
                raise ValueError("variances must be positive")


def _uniforms(seed: int, stream: int, count: int) -> np.ndarray:
    """Open-interval uniforms from an independent Philox counter stream."""
    key = np.array([seed & _MASK64, stream], dtype=np.uint64)
    u = Generator(Philox(key=key)).random(count)
    return u + 2.0**-54  # shift off exact zero; stays below 1


def _normal(seed: int, stream: int, count: int, mean: float, variance: float) -> np.ndarray:
    return mean + np.sqrt(variance) * ndtri(_uniforms(seed, stream, count))


def gen_stationary(
    count: int, seed: int = 0, mean: float = 5.0, variance: float = 1.0
) -> np.ndarray:
    """Stationary stream: i.i.d. draws from Normal(mean, variance)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    return _normal(seed, 0, count, mean, variance)


def gen_mixture(
    count: int,
    seed: int = 0,
    first: tuple[float, float] = DEFAULT_MIXTURE[0],
    second: tuple[float, float] = DEFAULT_MIXTURE[1],
) -> np.ndarray:
    """Coin-flip mixture: each datum comes from one of two normals.

    ``y = c * y1 + (1 - c) * y2`` with the coin ``c`` uniform on {0, 1},
    ``y1 ~ Normal(*first)`` and ``y2 ~ Normal(*second)``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    key = np.array([seed & _MASK64, 0], dtype=np.uint64)
    coin = Generator(Philox(key=key)).integers(0, 2, size=count).astype(float)
    y1 = _normal(seed, 1, count, *first)
    y2 = _normal(seed, 2, count, *second)
    return coin * y1 + (1.0 - coin) * y2


def read_stream(path) -> np.ndarray:
    """Parse a stream file: one value per line, ``#`` comments allowed."""
    values: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from None
    if not values:
        raise ValueError(f"{path}: no data values found")
    return np.asarray(values, dtype=float)


def format_stream(values, header: str | None = None) -> str:
    """Render values in the stream file format (repr round-trips exactly)."""
    buf = io.StringIO()
    if header:
        for line in header.splitlines():
            buf.write(f"# {line}\n")
    for v in np.asarray(values, dtype=float):
        buf.write(repr(float(v)))
        buf.write("\n")
    return buf.getvalue()


def write_stream(path, values, header: str | None = None) -> None:
    """Write values to a stream file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_stream(values, header=header))


def materialize(spec: StreamSpec) -> np.ndarray:
    """Produce the stream described by a :class:`StreamSpec`."""
    if spec.kind == "stationary-normal":
        (mean, variance) = (spec.components or DEFAULT_NORMAL)[0]
        return gen_stationary(spec.count, spec.seed, mean, variance)
    if spec.kind == "coin-mixture":
        components = spec.components or DEFAULT_MIXTURE
        if len(components) != 2:
            raise ValueError("coin-mixture takes exactly two (mean, variance) pairs")
        return gen_mixture(spec.count, spec.seed, components[0], components[1])
    return read_stream(spec.path)


def inject_extremes(values, every: int, factor: float = 100.0) -> np.ndarray:
    """Replace every ``every``-th datum with ``factor`` times the running max.

    Stresses range-rescaling estimators with sudden far-out-of-range values;
    injected values compound (each later injection sees the earlier ones).
    """
    if every < 1:
        raise ValueError("every must be at least 1")
    out = np.array(values, dtype=float)
    running = -np.inf
    for start in range(0, out.size, every):
        stop = min(start + every, out.size)
        inject = stop == start + every  # block ends on an injection step
        prefix = out[start : stop - 1] if inject else out[start:stop]
        if prefix.size:
            running = max(running, float(np.max(prefix)))
        if inject:
            if np.isfinite(running):  # nothing to scale before the very first datum
                out[stop - 1] = factor * running
            running = max(running, float(out[stop - 1]))
    return out
