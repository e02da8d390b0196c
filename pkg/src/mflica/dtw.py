"""Banded multivariate dynamic time warping.

Unit-weight three-move recurrence (``symmetric1``) with a Sakoe-Chiba band
on the raw index difference and a Euclidean local cost. Traceback breaks
ties diagonal first, then ``(i-1, j)``, then ``(i, j-1)``, so the returned
path is fully determined by the inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .errors import DimensionMismatch, InfeasibleBand, ValidationError

DEFAULT_LAG_WINDOW = 0.1


@dataclass(frozen=True)
class BandSpec:
    lag_window: float = DEFAULT_LAG_WINDOW

    def __post_init__(self):
        if not (0.0 <= self.lag_window <= 1.0):
            raise ValidationError(f"lag_window must be in [0, 1], got {self.lag_window}")

    def radius(self, n_y: int, n_x: int) -> int:
        longest = max(n_y, n_x)
        if self.lag_window >= 1.0:
            return longest
        # guard against 0.1 * 30 == 3.0000000000000004 style rounding
        r = math.ceil(self.lag_window * longest - 1e-9)
        if self.lag_window > 0:
            r = max(r, 1)
        return r


@dataclass(frozen=True)
class WarpingPath:
    """Optimal alignment; indices are 1-based, ``index_y`` into the follower."""

    index_y: np.ndarray
    index_x: np.ndarray
    total_cost: float

    def __len__(self):
        return len(self.index_y)

    def pairs(self):
        return list(zip(self.index_y.tolist(), self.index_x.tolist()))


def _as_series(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValidationError(f"series must be 1-D or (T, D), got shape {a.shape}")
    return a


def local_distance(a, b) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    if a.shape != b.shape:
        raise DimensionMismatch(f"vectors of length {a.size} and {b.size}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


@nb.njit(cache=True, nogil=True)
def _cost_matrix(y, x, radius):
    ny, nx = y.shape[0], x.shape[0]
    dims = y.shape[1]
    acc = np.full((ny + 1, nx + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, ny + 1):
        lo = max(1, i - radius)
        hi = min(nx, i + radius)
        for j in range(lo, hi + 1):
            s = 0.0
            for k in range(dims):
                diff = y[i - 1, k] - x[j - 1, k]
                s += diff * diff
            best = acc[i - 1, j - 1]
            if acc[i - 1, j] < best:
                best = acc[i - 1, j]
            if acc[i, j - 1] < best:
                best = acc[i, j - 1]
            acc[i, j] = math.sqrt(s) + best
    return acc


@nb.njit(cache=True, nogil=True)
def _traceback(acc):
    i, j = acc.shape[0] - 1, acc.shape[1] - 1
    buf_y = np.empty(i + j, dtype=np.int64)
    buf_x = np.empty(i + j, dtype=np.int64)
    n = 0
    while True:
        buf_y[n] = i
        buf_x[n] = j
        n += 1
        if i == 1 and j == 1:
            break
        diag = acc[i - 1, j - 1]
        up = acc[i - 1, j]
        left = acc[i, j - 1]
        if diag <= up and diag <= left:
            i -= 1
            j -= 1
        elif up <= left:
            i -= 1
        else:
            j -= 1
    return buf_y[:n][::-1].copy(), buf_x[:n][::-1].copy()


@nb.njit(cache=True, nogil=True)
def _sign_mean_lag(y, x, radius):
    """(mean sign, mean lag, path length) of the optimal path, no allocation of a path object."""
    acc = _cost_matrix(y, x, radius)
    iy, ix = _traceback(acc)
    n = iy.shape[0]
    sgn = 0
    lag = 0
    for k in range(n):
        d = iy[k] - ix[k]
        lag += d
        if d > 0:
            sgn += 1
        elif d < 0:
            sgn -= 1
    return sgn / n, lag / n, n


def _check_pair(y, x, band: BandSpec) -> int:
    if y.shape[0] < 1 or x.shape[0] < 1:
        raise ValidationError("series must have at least one step")
    if y.shape[1] != x.shape[1]:
        raise DimensionMismatch(f"series have {y.shape[1]} and {x.shape[1]} dims")
    radius = band.radius(y.shape[0], x.shape[0])
    if radius < abs(y.shape[0] - x.shape[0]):
        raise InfeasibleBand(
            f"band radius {radius} cannot connect lengths {y.shape[0]} and {x.shape[0]}"
        )
    return radius


def cost_matrix(Y, X, band: BandSpec = BandSpec()) -> np.ndarray:
    """Accumulated cost, shape ``(T_y + 1, T_x + 1)``; cells outside the band are inf."""
    y, x = _as_series(Y), _as_series(X)
    radius = _check_pair(y, x, band)
    return _cost_matrix(y, x, radius)


def dtw_align(Y, X, band: BandSpec = BandSpec()) -> WarpingPath:
    """Optimal warping path between follower candidate ``Y`` and leader candidate ``X``.

    Parameters
    ----------
    Y, X : array, shape (T, D) or (T,)
        The two series. They must share ``D``.
    band : BandSpec
        Sakoe-Chiba band; radius is ``ceil(lag_window * max(T_y, T_x))``.

    Returns
    -------
    WarpingPath
        1-based index pairs from ``(1, 1)`` to ``(T_y, T_x)`` plus the summed
        local cost along them.
    """
    y, x = _as_series(Y), _as_series(X)
    radius = _check_pair(y, x, band)
    acc = _cost_matrix(y, x, radius)
    iy, ix = _traceback(acc)
    return WarpingPath(iy, ix, float(acc[-1, -1]))


def mean_lag(p: WarpingPath) -> float:
    """Mean of ``index_y - index_x``; positive when Y trails X."""
    return float(np.mean(p.index_y - p.index_x))
