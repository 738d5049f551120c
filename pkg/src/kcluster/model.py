"""Shared domain types: nodes, clusters, the coordinator node, radio energy
model, rating weights and per-round metrics."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

NodeId = int

MAX_CONSECUTIVE_TERMS = 2


class ConfigError(ValueError):
    """Raised for invalid simulation configuration."""


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite position ({self.x}, {self.y})")


def distance(a: Position, b: Position) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass
class SensorNode:
    id: NodeId
    position: Position
    initial_energy: float
    cluster: int
    failure_rate: float = 0.001
    residual_energy: float = field(default=-1.0)
    consecutive_ch_terms: int = 0
    history_window: int = 5
    position_history: deque = field(default=None, repr=False)

    def __post_init__(self):
        if self.initial_energy <= 0:
            raise ValueError("initial_energy must be positive")
        if self.residual_energy < 0:
            self.residual_energy = self.initial_energy
        if self.position_history is None:
            # W displacements need W + 1 samples
            self.position_history = deque([self.position], maxlen=self.history_window + 1)

    @property
    def alive(self) -> bool:
        return self.residual_energy > 0

    def move_to(self, pos: Position) -> None:
        self.position = pos
        self.position_history.append(pos)

    def debit(self, joules: float) -> float:
        """Drain up to `joules` from the battery and return what was actually taken.

        Debits are floored at zero; a node at zero is dead.
        """
        if joules < 0:
            raise ValueError("negative debit")
        taken = min(joules, self.residual_energy)
        if taken >= self.residual_energy:
            self.residual_energy = 0.0
        else:
            self.residual_energy -= taken
        return taken


@dataclass
class Cluster:
    id: int
    members: list[NodeId]
    head: Optional[NodeId] = None
    k: int = 0
    extinct: bool = False


@dataclass(frozen=True)
class CoordinatorNode:
    """Resource-rich relay between cluster heads and the base station.

    Reachable from every node; its energy is not tracked.
    """

    position: Position
    reachable: bool = True


@dataclass(frozen=True)
class RadioEnergyModel:
    e_elec: float = 50e-9
    eps_amp: float = 100e-12
    e_agg: float = 5e-9
    packet_bits: int = 2000
    ctrl_bits: int = 200

    def __post_init__(self):
        if min(self.e_elec, self.eps_amp, self.e_agg) < 0:
            raise ConfigError("energy coefficients must be non-negative")
        if self.packet_bits <= 0 or self.ctrl_bits <= 0:
            raise ConfigError("message sizes must be positive")


def tx_energy(model: RadioEnergyModel, bits: int, d: float) -> float:
    if bits <= 0:
        raise ValueError("bits must be positive")
    if d < 0:
        raise ValueError("negative distance")
    return bits * (model.e_elec + model.eps_amp * d * d)


def rx_energy(model: RadioEnergyModel, bits: int) -> float:
    if bits <= 0:
        raise ValueError("bits must be positive")
    return bits * model.e_elec


@dataclass(frozen=True)
class RatingWeights:
    w_energy: float = 0.4
    w_distance: float = 0.3
    w_reliability: float = 0.2
    w_mobility: float = 0.1

    def __post_init__(self):
        ws = self.as_tuple()
        if any(not (0.0 <= w <= 1.0) for w in ws):
            raise ConfigError(f"rating weights must lie in [0, 1]: {ws}")
        if abs(sum(ws) - 1.0) > 1e-9:
            raise ConfigError(f"rating weights must sum to 1, got {sum(ws)!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w_energy, self.w_distance, self.w_reliability, self.w_mobility)


def _sig9(x: float) -> float:
    return float(format(x, ".9g"))


@dataclass(frozen=True)
class RoundMetrics:
    """Per-round summary. Float fields are held at 9 significant digits so a
    CSV round trip is lossless."""

    round: int
    alive: int
    total_residual: float
    residual_variance: float
    messages_data: int
    messages_ctrl: int
    ch_ids: tuple[int, ...]
    reselection_events: int

    def __post_init__(self):
        object.__setattr__(self, "total_residual", _sig9(self.total_residual))
        object.__setattr__(self, "residual_variance", _sig9(self.residual_variance))
        object.__setattr__(self, "ch_ids", tuple(self.ch_ids))
