"""Candidate cluster-head selection by k-nearest-neighbour frequency voting.

Every alive member of a cluster lists its k nearest co-members; a node's
frequency is one (itself) plus the number of lists it appears in.  Nodes whose
frequency reaches the rounded mean frequency plus one are the candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import ConfigError, NodeId, Position


@dataclass(frozen=True)
class NeighborList:
    owner: NodeId
    neighbors: tuple[NodeId, ...]
    truncated: bool = False


@dataclass(frozen=True)
class KSelection:
    cluster: int
    k: int
    frequencies: dict[NodeId, int]
    threshold: int
    candidates: frozenset[NodeId]
    lists: tuple[NeighborList, ...] = ()
    fallback: bool = False


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def cluster_k(n_alive: int, r: float) -> int:
    """Neighbour-list size for a cluster with `n_alive` live members.

    Returns 0 for a single-node cluster, whose sole member heads by default.
    """
    if not (0 < r <= 0.5):
        raise ConfigError(f"ratio r must be in (0, 0.5], got {r}")
    if n_alive < 1:
        raise ValueError("cluster has no alive members")
    if n_alive == 1:
        return 0
    return min(max(round_half_up(n_alive * r), 1), n_alive - 1)


def _coords(positions: Mapping[NodeId, Position]) -> tuple[list[NodeId], np.ndarray]:
    ids = sorted(positions)
    pts = np.array([(positions[i].x, positions[i].y) for i in ids], dtype=float).reshape(-1, 2)
    return ids, pts


def effective_distance_matrix(points: np.ndarray) -> np.ndarray:
    """Pairwise one-relay energy cost: min(d(u,v)^2, min_w d(u,w)^2 + d(w,v)^2).

    Relaying through u or v itself reproduces the direct term, so the relay
    minimum can safely range over every node.
    """
    diff = points[:, None, :] - points[None, :, :]
    d2 = (diff**2).sum(axis=-1)
    if len(points) == 0:
        return d2
    relay = (d2[:, :, None] + d2[None, :, :]).min(axis=1)
    return np.minimum(d2, relay)


def effective_distance(u: NodeId, v: NodeId, positions: Mapping[NodeId, Position]) -> float:
    if u == v:
        raise ValueError("effective distance needs two distinct nodes")
    ids, pts = _coords(positions)
    iu, iv = ids.index(u), ids.index(v)
    d2 = ((pts - pts[iu]) ** 2).sum(axis=1)
    d2v = ((pts - pts[iv]) ** 2).sum(axis=1)
    return float(min(d2[iv], (d2 + d2v).min()))


def knn_lists(positions: Mapping[NodeId, Position], k: int) -> list[NeighborList]:
    """k nearest co-members of each alive node, nearest first.

    `positions` must hold the alive members only.  Ties go to the lower id.
    With fewer than k + 1 members the lists are truncated and flagged.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    ids, pts = _coords(positions)
    n = len(ids)
    if n == 0:
        return []
    size = min(k, n - 1)
    truncated = size < k
    cost = effective_distance_matrix(pts)
    np.fill_diagonal(cost, np.inf)
    id_arr = np.asarray(ids)
    ties = np.broadcast_to(id_arr, cost.shape)
    order = np.lexsort((ties, cost), axis=-1)[:, :size]
    picked = id_arr[order].tolist()
    return [NeighborList(owner, tuple(picked[i]), truncated) for i, owner in enumerate(ids)]


def frequency_of_occurrence(lists: Sequence[NeighborList]) -> dict[NodeId, int]:
    freq = {nl.owner: 1 for nl in lists}
    for nl in lists:
        for v in nl.neighbors:
            freq[v] = freq.get(v, 1) + 1
    return freq


def selection_threshold(frequencies: Mapping[NodeId, int]) -> int:
    if not frequencies:
        raise ValueError("empty frequency map")
    # grouping by frequency value and weighting by group size gives the plain mean
    return round_half_up(sum(frequencies.values()) / len(frequencies)) + 1


def candidate_set(frequencies: Mapping[NodeId, int], threshold: int, k: int) -> frozenset[NodeId]:
    """Nodes at or above `threshold`; if none qualify, the k most frequent."""
    primary = frozenset(v for v, f in frequencies.items() if f >= threshold)
    if primary:
        return primary
    ranked = sorted(frequencies, key=lambda v: (-frequencies[v], v))
    return frozenset(ranked[: max(k, 1)])


def ordered_by_frequency(frequencies: Mapping[NodeId, int]) -> dict[int, tuple[NodeId, ...]]:
    """Group node ids by frequency value, ascending."""
    groups: dict[int, list[NodeId]] = {}
    for v in sorted(frequencies):
        groups.setdefault(frequencies[v], []).append(v)
    return {f: tuple(groups[f]) for f in sorted(groups)}


def select_candidates(cluster_id: int, positions: Mapping[NodeId, Position], k: int) -> KSelection:
    """Run the full vote for one cluster given its alive members' positions."""
    if len(positions) == 1:
        (only,) = positions
        return KSelection(cluster_id, 0, {only: 1}, 2, frozenset([only]),
                          (NeighborList(only, ()),), fallback=True)
    lists = knn_lists(positions, k)
    freq = frequency_of_occurrence(lists)
    threshold = selection_threshold(freq)
    cands = candidate_set(freq, threshold, k)
    fallback = not any(f >= threshold for f in freq.values())
    return KSelection(cluster_id, k, freq, threshold, cands, tuple(lists), fallback)


TABLE_I_LISTS: dict[NodeId, tuple[NodeId, ...]] = {
    1: (2, 3, 4),
    2: (1, 4, 5),
    3: (1, 4, 6),
    4: (2, 3, 6),
    5: (2, 4, 6),
    6: (3, 4, 5),
    7: (3, 9, 10),
    8: (5, 6, 9),
    9: (6, 8, 10),
    10: (6, 7, 9),
}
