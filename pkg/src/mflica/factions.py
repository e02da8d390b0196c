"""Faction leaders, members and size ratios from a following-network snapshot."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import IndexOutOfRange, NotSquare, ValidationError


@dataclass(frozen=True)
class Faction:
    leader: int
    members: tuple
    size_ratio: float


@dataclass(frozen=True)
class FactionAssignment:
    """Factions at one step, largest ``size_ratio`` first. Indices are 0-based."""

    factions: tuple = ()
    t: Optional[int] = None

    @property
    def leaders(self) -> list:
        return [f.leader for f in self.factions]

    @property
    def members(self) -> dict:
        return {f.leader: set(f.members) for f in self.factions}

    @property
    def size_ratio(self) -> dict:
        return {f.leader: f.size_ratio for f in self.factions}

    def to_json(self, ids=None) -> dict:
        label = (lambda i: ids[i]) if ids is not None else (lambda i: i + 1)
        return {
            "t": self.t,
            "factions": [
                {
                    "leader": label(f.leader),
                    "members": [label(m) for m in f.members],
                    "size_ratio": f.size_ratio,
                }
                for f in self.factions
            ],
        }


def _square(a, name) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"{name} must be square, got shape {a.shape}")
    return a


def reachable_nodes(binary, leader: int) -> set:
    """Nodes with a follow-chain to ``leader`` (0-based), the leader included.

    Edges run ``i -> j`` wherever ``binary[i, j]`` is set, i.e. from a leader to
    its follower.
    """
    b = _square(binary, "binary") != 0
    n = b.shape[0]
    if not (0 <= leader < n):
        raise IndexOutOfRange(f"node {leader} outside [0, {n - 1}]")
    seen = {leader}
    queue = deque([leader])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(b[u]):
            v = int(v)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def find_leaders(binary) -> list:
    """Nodes that follow nobody and have at least one follower."""
    b = _square(binary, "binary") != 0
    follows_someone = b.any(axis=0)
    has_follower = b.any(axis=1)
    return [int(i) for i in np.flatnonzero(has_follower & ~follows_someone)]


def faction_ratio(weighted, members) -> float:
    w = np.asarray(weighted, dtype=np.float64)
    n = w.shape[0]
    idx = np.array(sorted(members), dtype=np.int64)
    sub = w[np.ix_(idx, idx)]
    return float((sub.sum() - np.trace(sub)) / (n * (n - 1) / 2))


def get_factions(binary, weighted, t: Optional[int] = None) -> FactionAssignment:
    """Leaders, their reachable member sets, and weighted internal density of each set.

    The ratio is normalized by the global pair count ``N(N-1)/2`` so it grows
    with both the faction's size and how strongly its members follow.
    """
    b = _square(binary, "binary")
    w = _square(weighted, "weighted")
    if b.shape != w.shape:
        raise ValidationError(f"binary {b.shape} and weighted {w.shape} differ in shape")
    factions = []
    for leader in find_leaders(b):
        members = reachable_nodes(b, leader)
        factions.append(Faction(leader, tuple(sorted(members)), faction_ratio(w, members)))
    factions.sort(key=lambda f: (-f.size_ratio, f.leader))
    return FactionAssignment(tuple(factions), t)


def network_factions(net, t: Optional[int] = None) -> FactionAssignment:
    return get_factions(net.binary, net.weighted, t)
