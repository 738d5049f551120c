"""Combined rating of candidate cluster heads and head election."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .model import (
    MAX_CONSECUTIVE_TERMS,
    CoordinatorNode,
    NodeId,
    RatingWeights,
    SensorNode,
    distance,
)


@dataclass(frozen=True)
class RatingInputs:
    alpha: float  # residual energy score
    beta: float  # closeness to the coordinator node
    reliability: float
    mobility: float  # 1 = most mobile

    def __post_init__(self):
        for name in ("alpha", "beta", "reliability", "mobility"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v} outside [0, 1]")


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def energy_score(node: SensorNode) -> float:
    return node.residual_energy / node.initial_energy


def distance_score(node: SensorNode, cn: CoordinatorNode, d_max: float) -> float:
    if not d_max > 0:
        raise ValueError("d_max must be positive")
    return _clamp01(1.0 - distance(node.position, cn.position) / d_max)


def reliability(failure_rate: float, t: float) -> float:
    """Poisson probability of no failure in (0, t)."""
    if failure_rate < 0 or t < 0:
        raise ValueError("failure_rate and t must be non-negative")
    return math.exp(-failure_rate * t)


def mobility_degree(node: SensorNode, window: int, v_max: float) -> float:
    """Mean per-round displacement over the last `window` rounds, over v_max."""
    if window < 1 or not v_max > 0:
        raise ValueError("window must be >= 1 and v_max > 0")
    hist = list(node.position_history)[-(window + 1):]
    if len(hist) < 2:
        return 0.0
    steps = [distance(a, b) for a, b in zip(hist, hist[1:])]
    return _clamp01(sum(steps) / len(steps) / v_max)


def combined_rating(inputs: RatingInputs, w: RatingWeights) -> float:
    cr = (
        w.w_energy * inputs.alpha
        + w.w_distance * inputs.beta
        + w.w_reliability * inputs.reliability
        + w.w_mobility * (1.0 - inputs.mobility)
    )
    return _clamp01(cr)


def rating_inputs(node: SensorNode, cn: CoordinatorNode, d_max: float, t: float,
                  window: int, v_max: float) -> RatingInputs:
    return RatingInputs(
        alpha=_clamp01(energy_score(node)),
        beta=distance_score(node, cn, d_max),
        reliability=reliability(node.failure_rate, t),
        mobility=mobility_degree(node, window, v_max),
    )


def _argmax(ids: Iterable[NodeId], ratings: Mapping[NodeId, float]) -> Optional[NodeId]:
    best = None
    for v in sorted(ids):
        if best is None or ratings[v] > ratings[best]:
            best = v
    return best


def elect_head(
    candidates: Iterable[NodeId],
    ratings: Mapping[NodeId, float],
    terms: Optional[Mapping[NodeId, int]] = None,
) -> NodeId:
    """Highest-rated candidate below the consecutive-term limit; ties to the lower id.

    When every candidate is at the limit, the best-rated other node present in
    `ratings` is chosen instead.
    """
    candidates = set(candidates)
    if not candidates:
        raise ValueError("empty candidate set")
    terms = terms or {}

    def eligible(v):
        return terms.get(v, 0) < MAX_CONSECUTIVE_TERMS

    head = _argmax((v for v in candidates if eligible(v)), ratings)
    if head is None:
        head = _argmax((v for v in ratings if v not in candidates and eligible(v)), ratings)
    if head is None:
        raise ValueError("no eligible node to elect")
    return head
