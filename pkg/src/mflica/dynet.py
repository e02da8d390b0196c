"""Sliding-window dynamic following networks.

Each window of length ``omega`` (starts ``1, 1+delta, 1+2*delta, ...`` plus a
last window clamped to end at ``T``) gets its own static following network.
The network at step ``t`` is the mean of the weighted matrices of every
window containing ``t``. Averaging can leave both ``w[i, j]`` and ``w[j, i]``
positive when windows disagree on direction; the larger one is kept and the
smaller zeroed (equal values zero both).
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dtw import BandSpec
from .errors import BadWindowParams, IoFailure, TooFewIndividuals, ValidationError
from .follow import network_density, pair_scores, threshold, weights_from_scores
from .timeseries import TimeSeriesSet

TENSOR_MAGIC = b"MFLD1"


@dataclass(frozen=True)
class DynamicParams:
    omega: int
    delta: int
    sigma: float
    lag_window: float


@dataclass(frozen=True, eq=False)
class DynamicNetwork:
    """Per-step networks; ``weights[i, j, t-1]`` is how much ``j`` follows ``i`` at step ``t``."""

    weights: np.ndarray
    binary: np.ndarray
    density: np.ndarray
    params: DynamicParams
    windows: tuple
    ids: tuple

    @property
    def n_steps(self) -> int:
        return self.weights.shape[2]

    def snapshot(self, t: int):
        """``(weighted, binary)`` at 1-based step ``t``."""
        return self.weights[:, :, t - 1], self.binary[:, :, t - 1]


def window_starts(n_steps: int, omega: int, delta: int) -> list:
    validate_window_params(n_steps, omega, delta)
    starts = list(range(1, n_steps - omega + 2, delta))
    if starts[-1] + omega - 1 < n_steps:
        starts.append(n_steps - omega + 1)
    return starts


def validate_window_params(n_steps: int, omega: int, delta: int) -> None:
    if not (2 <= omega <= n_steps):
        raise BadWindowParams(f"time window must be in [2, {n_steps}], got {omega}")
    if not (1 <= delta <= omega):
        raise BadWindowParams(f"time shift must be in [1, {omega}], got {delta}")


def resolve_conflicts(w: np.ndarray) -> np.ndarray:
    """Keep at most one direction per pair, along the first two axes."""
    wt = np.swapaxes(w, 0, 1)
    both = (w > 0) & (wt > 0)
    return np.where(both & (w <= wt), 0.0, w)


def dynamic_following_network(
    tss: TimeSeriesSet,
    omega: int,
    delta: int,
    sigma: float = 0.5,
    band: BandSpec = BandSpec(),
    threads: int = 1,
) -> DynamicNetwork:
    if tss.n_individuals < 2:
        raise TooFewIndividuals(f"need at least 2 individuals, got {tss.n_individuals}")
    if not (0.0 <= sigma <= 1.0):
        raise ValidationError(f"sigma must be in [0, 1], got {sigma}")
    n, n_steps = tss.n_individuals, tss.n_steps
    starts = window_starts(n_steps, omega, delta)

    def window_weights(start):
        seg = tss.values[:, start - 1 : start - 1 + omega]
        return weights_from_scores(pair_scores(seg, band))

    # parallelism is over windows; each window is computed serially
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_window = list(pool.map(window_weights, starts))
    else:
        per_window = [window_weights(s) for s in starts]

    weights = np.zeros((n, n, n_steps))
    first = 0
    for t in range(1, n_steps + 1):
        while starts[first] + omega - 1 < t:
            first += 1
        total = np.zeros((n, n))
        count = 0
        k = first
        while k < len(starts) and starts[k] <= t:
            total += per_window[k]
            count += 1
            k += 1
        weights[:, :, t - 1] = total / count

    weights = resolve_conflicts(weights)
    binary = threshold(weights, sigma)
    density = np.array([network_density(weights[:, :, t]) for t in range(n_steps)])
    windows = tuple((s, s + omega - 1) for s in starts)
    return DynamicNetwork(
        weights, binary, density, DynamicParams(omega, delta, sigma, band.lag_window),
        windows, tss.ids,
    )


def write_tensor(weights: np.ndarray, path) -> None:
    """Binary dump: ``MFLD1``, N and T as little-endian uint32, then float64 LE in (i, j, t) C order."""
    n, n2, t = weights.shape
    if n != n2:
        raise ValidationError(f"tensor must be N x N x T, got {weights.shape}")
    try:
        with open(path, "wb") as fh:
            fh.write(TENSOR_MAGIC)
            fh.write(struct.pack("<II", n, t))
            fh.write(np.ascontiguousarray(weights, dtype="<f8").tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_tensor(path) -> np.ndarray:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    head = len(TENSOR_MAGIC) + 8
    if data[: len(TENSOR_MAGIC)] != TENSOR_MAGIC or len(data) < head:
        raise ValidationError(f"{path}: not an MFLD1 tensor file")
    n, t = struct.unpack("<II", data[len(TENSOR_MAGIC) : head])
    body = np.frombuffer(data, dtype="<f8", offset=head)
    if body.size != n * n * t:
        raise ValidationError(f"{path}: expected {n * n * t} values, found {body.size}")
    return body.reshape(n, n, t).astype(np.float64)
