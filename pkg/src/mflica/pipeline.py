"""End-to-end leadership inference over time."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dtw import BandSpec
from .dynet import DynamicNetwork, dynamic_following_network
from .factions import FactionAssignment, get_factions
from .timeseries import TimeSeriesSet


@dataclass(frozen=True, eq=False)
class LeadershipResult:
    """Dynamic network plus per-step factions.

    ``faction_ratio_series[i, t-1]`` is the size ratio of the faction led by
    individual ``i`` at step ``t`` (0 when ``i`` leads nothing).
    """

    dynet: DynamicNetwork
    faction_ratio_series: np.ndarray
    leader_timeline: tuple
    factions: tuple

    @property
    def ids(self):
        return self.dynet.ids

    @property
    def params(self):
        return self.dynet.params

    @property
    def density(self):
        return self.dynet.density

    def dominant_leader(self) -> np.ndarray:
        """Per-step argmax of the faction ratios, -1 where no faction exists."""
        best = np.argmax(self.faction_ratio_series, axis=0)
        return np.where(self.faction_ratio_series.max(axis=0) > 0, best, -1)


def run_mflica(
    tss: TimeSeriesSet,
    omega: int,
    delta: int,
    sigma: float = 0.5,
    band: BandSpec = BandSpec(),
    threads: int = 1,
) -> LeadershipResult:
    dyn = dynamic_following_network(tss, omega, delta, sigma, band, threads=threads)
    n, n_steps = tss.n_individuals, tss.n_steps

    def step(t) -> FactionAssignment:
        w, b = dyn.snapshot(t)
        return get_factions(b, w, t)

    steps = range(1, n_steps + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_step = list(pool.map(step, steps))
    else:
        per_step = [step(t) for t in steps]

    ratios = np.zeros((n, n_steps))
    timeline = []
    for fa in per_step:
        for f in fa.factions:
            ratios[f.leader, fa.t - 1] = f.size_ratio
        timeline.append(frozenset(fa.leaders))
    return LeadershipResult(dyn, ratios, tuple(timeline), tuple(per_step))
