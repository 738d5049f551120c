"""Request and response models for the simulation service."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from ..config import MobilitySpec, SimConfig
from ..model import RadioEnergyModel, RatingWeights


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class EnergyModelIn(_Strict):
    e_elec: float = Field(50e-9, ge=0, description="J/bit, transmitter and receiver electronics")
    eps_amp: float = Field(100e-12, ge=0, description="J/bit/m^2, transmit amplifier")
    e_agg: float = Field(5e-9, ge=0, description="J/bit per aggregated signal")
    packet_bits: int = Field(2000, gt=0)
    ctrl_bits: int = Field(200, gt=0)


class WeightsIn(_Strict):
    w_energy: float = Field(0.4, ge=0, le=1)
    w_distance: float = Field(0.3, ge=0, le=1)
    w_reliability: float = Field(0.2, ge=0, le=1)
    w_mobility: float = Field(0.1, ge=0, le=1)


class MobilityIn(_Strict):
    mode: Literal["static", "random-waypoint"] = "static"
    v_max: float = Field(1.0, gt=0, description="meters per round")
    pause: int = Field(0, ge=0, description="rounds paused at each waypoint")
    window: int = Field(5, ge=1, description="rounds of history for the mobility degree")


class SimConfigIn(_Strict):
    """Simulation configuration; mirrors the config file field for field."""

    field_width: float = Field(100.0, gt=0)
    field_height: float = Field(100.0, gt=0)
    cluster_count: int = Field(5, ge=1)
    nodes_per_cluster: list[int] = Field(default_factory=lambda: [20] * 5)
    r: float = Field(0.15, gt=0, le=0.5, description="cluster-head ratio")
    initial_energy: float = Field(0.25, gt=0, description="joules per node")
    energy: EnergyModelIn = Field(default_factory=EnergyModelIn)
    weights: WeightsIn = Field(default_factory=WeightsIn)
    topology: Literal["uniform", "gaussian-clustered"] = "uniform"
    cluster_spread: float = Field(8.0, gt=0, description="gaussian-clustered std-dev scale, meters")
    cn_position: Union[Literal["centroid"], tuple[float, float]] = "centroid"
    mobility: MobilityIn = Field(default_factory=MobilityIn)
    failure_rate: float = Field(0.001, ge=0, description="failures per round")
    max_rounds: int = Field(5000, ge=0)
    seed: int = Field(1, ge=0, lt=2**64)
    scheme: Literal["ktheorem", "baseline", "random-baseline"] = "ktheorem"

    def to_core(self) -> SimConfig:
        data = self.model_dump()
        return SimConfig(
            **{k: v for k, v in data.items() if k not in ("energy", "weights", "mobility")},
            energy=RadioEnergyModel(**data["energy"]),
            weights=RatingWeights(**data["weights"]),
            mobility=MobilitySpec(**data["mobility"]),
        )


class SimulateRequest(_Strict):
    config: SimConfigIn = Field(default_factory=SimConfigIn)
    seed: Optional[int] = Field(None, ge=0, lt=2**64)
    rounds: Optional[int] = Field(None, ge=0)
    scheme: Optional[Literal["ktheorem", "baseline", "random-baseline"]] = None
    replication: int = Field(0, ge=0)


class SimulateResponse(BaseModel):
    scheme: str
    rounds: int
    first_node_death_round: Optional[int]
    last_node_death_round: Optional[int]
    total_messages: int
    final_residuals: list[float]
    csv: str


class CompareRequest(_Strict):
    config: SimConfigIn = Field(default_factory=SimConfigIn)
    replications: int = Field(1, ge=1)
    schemes: tuple[Literal["ktheorem", "baseline"], Literal["ktheorem", "baseline"]] = ("ktheorem", "baseline")


class PairRowOut(BaseModel):
    replication: int
    checkpoint: int
    fnd_a: Optional[int]
    fnd_b: Optional[int]
    variance_a: float
    variance_b: float


class CompareResponse(BaseModel):
    schemes: tuple[str, str]
    mean_first_node_death: tuple[float, float]
    mean_checkpoint_variance: tuple[float, float]
    fraction_first_lower_variance: float
    rows: list[PairRowOut]
    csv: str


class Table1Response(BaseModel):
    k: int
    lists: dict[int, list[int]]
    frequencies: dict[int, int]
    ordered: dict[int, list[int]]
    threshold: int
    candidates: list[int]
