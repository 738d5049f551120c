"""Simulation configuration and its JSON ingestion."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Union

from .model import ConfigError, RadioEnergyModel, RatingWeights

SCHEMES = ("ktheorem", "baseline")
_SCHEME_ALIASES = {"random-baseline": "baseline", "random": "baseline"}
TOPOLOGY_MODES = ("uniform", "gaussian-clustered")
MOBILITY_MODES = ("static", "random-waypoint")


@dataclass(frozen=True)
class MobilitySpec:
    mode: str = "static"
    v_max: float = 1.0  # meters per round
    pause: int = 0  # rounds spent at each waypoint
    window: int = 5  # rounds of history used for the mobility degree

    def __post_init__(self):
        if self.mode not in MOBILITY_MODES:
            raise ConfigError(f"unknown mobility mode {self.mode!r}")
        if not self.v_max > 0:
            raise ConfigError("v_max must be positive")
        if self.pause < 0 or self.window < 1:
            raise ConfigError("pause must be >= 0 and window >= 1")


@dataclass(frozen=True)
class TopologySpec:
    mode: str
    field_width: float
    field_height: float
    cluster_count: int
    nodes_per_cluster: tuple[int, ...]
    cn_position: Union[str, tuple[float, float]] = "centroid"
    cluster_spread: float = 8.0

    def __post_init__(self):
        if self.mode not in TOPOLOGY_MODES:
            raise ConfigError(f"unknown topology mode {self.mode!r}")
        if not (self.field_width > 0 and self.field_height > 0):
            raise ConfigError("field dimensions must be positive")
        if self.cluster_count < 1:
            raise ConfigError("cluster_count must be >= 1")
        if len(self.nodes_per_cluster) != self.cluster_count:
            raise ConfigError(
                f"nodes_per_cluster has {len(self.nodes_per_cluster)} entries, "
                f"expected cluster_count={self.cluster_count}"
            )
        if any(n < 1 for n in self.nodes_per_cluster):
            raise ConfigError("every cluster needs at least one node")
        if self.cn_position != "centroid":
            x, y = self.cn_position
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ConfigError("cn_position must be finite")
        if not self.cluster_spread > 0:
            raise ConfigError("cluster_spread must be positive")


@dataclass(frozen=True)
class SimConfig:
    field_width: float = 100.0
    field_height: float = 100.0
    cluster_count: int = 5
    nodes_per_cluster: tuple[int, ...] = (20, 20, 20, 20, 20)
    r: float = 0.15
    initial_energy: float = 0.25
    energy: RadioEnergyModel = field(default_factory=RadioEnergyModel)
    weights: RatingWeights = field(default_factory=RatingWeights)
    topology: str = "uniform"
    cluster_spread: float = 8.0
    cn_position: Union[str, tuple[float, float]] = "centroid"
    mobility: MobilitySpec = field(default_factory=MobilitySpec)
    failure_rate: float = 0.001
    max_rounds: int = 5000
    seed: int = 1
    scheme: str = "ktheorem"

    def __post_init__(self):
        object.__setattr__(self, "nodes_per_cluster", tuple(int(n) for n in self.nodes_per_cluster))
        if isinstance(self.cn_position, (list, tuple)):
            object.__setattr__(self, "cn_position", tuple(float(v) for v in self.cn_position))
        scheme = _SCHEME_ALIASES.get(self.scheme, self.scheme)
        object.__setattr__(self, "scheme", scheme)
        if scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if not (0 < self.r <= 0.5):
            raise ConfigError(f"r must be in (0, 0.5], got {self.r}")
        if not self.initial_energy > 0:
            raise ConfigError("initial_energy must be positive")
        if self.failure_rate < 0:
            raise ConfigError("failure_rate must be >= 0")
        if self.max_rounds < 0:
            raise ConfigError("max_rounds must be >= 0")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must be a 64-bit unsigned integer")
        self.topology_spec()  # validates the deployment fields

    def topology_spec(self) -> TopologySpec:
        return TopologySpec(
            mode=self.topology,
            field_width=self.field_width,
            field_height=self.field_height,
            cluster_count=self.cluster_count,
            nodes_per_cluster=self.nodes_per_cluster,
            cn_position=self.cn_position,
            cluster_spread=self.cluster_spread,
        )

    @property
    def field_diagonal(self) -> float:
        return math.hypot(self.field_width, self.field_height)

    def with_overrides(self, **kw) -> "SimConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["nodes_per_cluster"] = list(self.nodes_per_cluster)
        if self.cn_position != "centroid":
            d["cn_position"] = list(self.cn_position)
        return d


_NESTED = {"energy": RadioEnergyModel, "weights": RatingWeights, "mobility": MobilitySpec}


def _build(cls, data: dict, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def config_from_dict(data: dict) -> SimConfig:
    """Build a SimConfig from a plain mapping, rejecting unknown keys."""
    data = dict(data)
    for key, cls in _NESTED.items():
        if key in data:
            data[key] = _build(cls, data[key], key)
    return _build(SimConfig, data, "config")


def load_config(path: Union[str, Path]) -> SimConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(data)
