"""Seeded synthetic collective-motion scenarios with known leaders.

Individuals live in the plane. During an event the designated leader walks
along ``heading`` (default +x) at ``leader_speed``; every other individual
steps ``follower_speed`` toward where the leader was on the previous step
(direct pursuit, never overshooting). Outside events nobody moves. The
recorded positions are the latent ones plus i.i.d. Gaussian noise of
standard deviation ``noise_std``, rounded to the CSV precision so a written
dataset reloads bit-exactly.

Random numbers come from numpy's ``PCG64`` bit generator seeded with
``seed``; draws happen in a fixed order (initial positions, then the noise
tensor), so output is reproducible for a given numpy ``PCG64`` stream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BadConfig, IoFailure
from .timeseries import TimeSeriesSet, quantize

DEFAULT_EVENTS = ((1, 1, 200), (2, 201, 400), (3, 401, 600))


@dataclass(frozen=True)
class Event:
    leader: int  # 1-based individual index
    t_start: int
    t_end: int


@dataclass(frozen=True)
class ScenarioConfig:
    n: int = 30
    steps: int = 800
    dims: int = 2
    events: tuple = DEFAULT_EVENTS
    follower_speed: float = 1.0
    leader_speed: float = 1.0
    noise_std: float = 0.1
    seed: int = 42
    box_size: float = 30.0

    def event_list(self) -> list:
        return [e if isinstance(e, Event) else Event(*e) for e in self.events]

    def validate(self) -> None:
        if self.n < 1 or self.steps < 1:
            raise BadConfig(f"n and steps must be positive, got n={self.n}, steps={self.steps}")
        if self.dims != 2:
            raise BadConfig(f"scenarios are planar, dims must be 2, got {self.dims}")
        if self.follower_speed <= 0 or self.leader_speed <= 0:
            raise BadConfig("speeds must be positive")
        if self.noise_std < 0:
            raise BadConfig("noise_std must be non-negative")
        if self.box_size < 0:
            raise BadConfig("box_size must be non-negative")
        if not (0 <= self.seed < 2**64):
            raise BadConfig(f"seed must fit in 64 bits, got {self.seed}")
        prev_end = 0
        for e in self.event_list():
            if not (1 <= e.leader <= self.n):
                raise BadConfig(f"event leader {e.leader} outside [1, {self.n}]")
            if not (1 <= e.t_start <= e.t_end <= self.steps):
                raise BadConfig(f"event [{e.t_start}, {e.t_end}] outside [1, {self.steps}]")
            if e.t_start <= prev_end:
                raise BadConfig("events must be ordered and non-overlapping")
            prev_end = e.t_end


@dataclass
class GroundTruth:
    seed: int
    n: int
    steps: int
    dims: int
    events: list = field(default_factory=list)
    ids: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "n": self.n,
            "steps": self.steps,
            "dims": self.dims,
            "events": [
                {"leader_id": self.ids[e.leader - 1], "t_start": e.t_start, "t_end": e.t_end}
                for e in self.events
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GroundTruth":
        ids = [str(i + 1) for i in range(doc["n"])]
        events = [
            Event(ids.index(str(e["leader_id"])) + 1, e["t_start"], e["t_end"])
            for e in doc["events"]
        ]
        return cls(doc["seed"], doc["n"], doc["steps"], doc["dims"], events, ids)


def write_truth(truth: GroundTruth, path) -> None:
    try:
        Path(path).write_text(json.dumps(truth.to_json(), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_truth(path) -> GroundTruth:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return GroundTruth.from_json(doc)


def _pursue(pos, target, speed):
    step = target - pos
    dist = np.hypot(step[..., 0], step[..., 1])[..., None]
    with np.errstate(invalid="ignore", divide="ignore"):
        scale = np.where(dist > speed, speed / dist, 1.0)
    return pos + step * scale


def simulate(
    initial: np.ndarray,
    steps: int,
    schedule,
    leader_speed: float,
    follower_speed: float,
) -> np.ndarray:
    """Noise-free trajectories, shape ``(n, steps, 2)``.

    ``schedule(t)`` returns a list of ``(leader, heading, followers)`` tuples
    (0-based indices) active at step ``t`` (1-based); ``heading`` is a unit vector.
    """
    n = initial.shape[0]
    out = np.empty((n, steps, 2))
    out[:, 0] = initial
    for t in range(2, steps + 1):
        prev = out[:, t - 2]
        cur = prev.copy()
        for leader, heading, followers in schedule(t):
            cur[leader] = prev[leader] + leader_speed * np.asarray(heading)
            f = np.asarray(followers, dtype=np.int64)
            if f.size:
                cur[f] = _pursue(prev[f], prev[leader], follower_speed)
        out[:, t - 1] = cur
    return out


def generate_dataset(cfg: ScenarioConfig = ScenarioConfig()):
    """Leader-switching scenario. Returns ``(TimeSeriesSet, GroundTruth)``."""
    cfg.validate()
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    initial = rng.uniform(0.0, cfg.box_size, size=(cfg.n, 2))
    noise = rng.normal(0.0, 1.0, size=(cfg.n, cfg.steps, 2)) * cfg.noise_std
    events = cfg.event_list()
    everyone = np.arange(cfg.n)

    def schedule(t):
        for e in events:
            if e.t_start <= t <= e.t_end:
                leader = e.leader - 1
                return [(leader, (1.0, 0.0), everyone[everyone != leader])]
        return []

    latent = simulate(initial, cfg.steps, schedule, cfg.leader_speed, cfg.follower_speed)
    ids = [str(i + 1) for i in range(cfg.n)]
    tss = TimeSeriesSet(quantize(latent + noise), tuple(ids))
    return tss, GroundTruth(cfg.seed, cfg.n, cfg.steps, 2, events, ids)


def generate_two_factions(
    n_per_faction: int = 15,
    steps: int = 200,
    separation: float = 100.0,
    leader_speed: float = 1.0,
    follower_speed: float = 1.0,
    noise_std: float = 0.1,
    box_size: float = 30.0,
    seed: int = 7,
):
    """Two simultaneous, independent factions moving in opposite directions.

    Faction A (leader index 0, followers ``1..n_per_faction``) heads +x near
    ``y = 0``; faction B (leader ``n_per_faction + 1`` and the rest) heads -x
    near ``y = separation``. Nobody pursues across factions.

    Returns ``(TimeSeriesSet, groups)`` where ``groups`` maps each leader's
    0-based index to the 0-based indices of its true faction.
    """
    if n_per_faction < 1 or steps < 2:
        raise BadConfig("need at least one follower per faction and two steps")
    rng = np.random.Generator(np.random.PCG64(seed))
    size = n_per_faction + 1
    n = 2 * size
    initial = rng.uniform(0.0, box_size, size=(n, 2))
    initial[size:, 1] += separation
    noise = rng.normal(0.0, 1.0, size=(n, steps, 2)) * noise_std
    a = np.arange(size)
    b = np.arange(size, n)
    plan = [(0, (1.0, 0.0), a[1:]), (size, (-1.0, 0.0), b[1:])]
    latent = simulate(initial, steps, lambda t: plan, leader_speed, follower_speed)
    tss = TimeSeriesSet(quantize(latent + noise), tuple(str(i + 1) for i in range(n)))
    return tss, {0: set(a.tolist()), size: set(b.tolist())}

