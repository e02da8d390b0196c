"""Pairwise following relations, static following networks and density."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .dtw import BandSpec, _as_series, _check_pair, _sign_mean_lag
from .errors import NotSquare, TooFewIndividuals, ValidationError
from .timeseries import TimeSeriesSet, WindowSpec


@dataclass(frozen=True)
class FollowResult:
    """``foll_val > 0`` means the first argument follows the second."""

    foll_val: float
    mean_lag: float
    path_len: int

    def negated(self) -> "FollowResult":
        return FollowResult(-self.foll_val, -self.mean_lag, self.path_len)


@dataclass(frozen=True, eq=False)
class FollowingNetwork:
    """Directed following network for one interval.

    ``weighted[i, j]`` is the degree to which ``j`` follows ``i`` (rows are
    leaders, columns followers). ``binary`` is ``weighted`` thresholded at
    ``sigma``.
    """

    weighted: np.ndarray
    binary: np.ndarray
    sigma: float
    window: Optional[WindowSpec] = None
    ids: tuple = ()

    @property
    def n(self) -> int:
        return self.weighted.shape[0]

    def density(self) -> float:
        return network_density(self.weighted)


def _canonical_first(a: np.ndarray, b: np.ndarray) -> bool:
    """Total order on series: shorter first, then lexicographic on the flattened values."""
    if a.shape != b.shape:
        return a.shape < b.shape
    fa, fb = a.ravel(), b.ravel()
    diff = np.flatnonzero(fa != fb)
    if diff.size == 0:
        return True
    k = diff[0]
    return bool(fa[k] < fb[k])


def following_relation(Y, X, band: BandSpec = BandSpec()) -> FollowResult:
    """How strongly ``Y`` follows ``X``: the mean sign of the warping-path lags.

    The DTW is always run in one canonical orientation of the pair and the
    result negated for the other, so ``following_relation(X, Y)`` is exactly
    the negation of ``following_relation(Y, X)``.
    """
    y, x = _as_series(Y), _as_series(X)
    if y.shape[0] < 2 or x.shape[0] < 2:
        raise ValidationError("following_relation needs series of length >= 2")
    if np.array_equal(y, x):
        return FollowResult(0.0, 0.0, y.shape[0])
    if _canonical_first(y, x):
        radius = _check_pair(y, x, band)
        s, lag, n = _sign_mean_lag(y, x, radius)
        return FollowResult(float(s), float(lag), int(n))
    radius = _check_pair(x, y, band)
    s, lag, n = _sign_mean_lag(x, y, radius)
    return FollowResult(float(s), float(lag), int(n)).negated()


def threshold(weighted: np.ndarray, sigma: float) -> np.ndarray:
    # only positive weights can become edges, so sigma == 0 does not connect everything
    return ((weighted >= sigma) & (weighted > 0)).astype(np.int8)


def pair_scores(values: np.ndarray, band: BandSpec, threads: int = 1) -> np.ndarray:
    """Antisymmetric ``S`` with ``S[i, j]`` = how much ``j`` follows ``i``."""
    n = values.shape[0]
    pairs = list(combinations(range(n), 2))

    def score(pair):
        i, j = pair
        return following_relation(values[j], values[i], band).foll_val

    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(score, pairs))
    else:
        scores = [score(p) for p in pairs]

    out = np.zeros((n, n))
    for (i, j), s in zip(pairs, scores):
        out[i, j] = s
        out[j, i] = -s
    return out


def weights_from_scores(scores: np.ndarray) -> np.ndarray:
    return np.where(scores > 0, scores, 0.0)


def following_network(
    tss: TimeSeriesSet,
    sigma: float = 0.5,
    band: BandSpec = BandSpec(),
    threads: int = 1,
    window: Optional[WindowSpec] = None,
) -> FollowingNetwork:
    """Static following network over ``tss`` (or over ``window`` of it)."""
    if tss.n_individuals < 2:
        raise TooFewIndividuals(f"need at least 2 individuals, got {tss.n_individuals}")
    if not (0.0 <= sigma <= 1.0):
        raise ValidationError(f"sigma must be in [0, 1], got {sigma}")
    values = tss.values
    if window is not None:
        window.validate(tss.n_steps)
        values = values[:, window.start - 1 : window.end]
    else:
        window = WindowSpec(1, tss.n_steps)
    weighted = weights_from_scores(pair_scores(values, band, threads))
    return FollowingNetwork(weighted, threshold(weighted, sigma), sigma, window, tss.ids)


def network_density(weighted) -> float:
    """Sum of weights over the number of unordered pairs ``N(N-1)/2``."""
    w = np.asarray(weighted, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise NotSquare(f"adjacency must be square, got shape {w.shape}")
    n = w.shape[0]
    if n < 2:
        return 0.0
    off = w.sum() - np.trace(w)
    return float(off / (n * (n - 1) / 2))
