"""Clustered wireless sensor network simulator with coordinator-node
cluster-head election by k-nearest-neighbour frequency voting."""

from .config import MobilitySpec, SimConfig, TopologySpec, config_from_dict, load_config
from .engine import Engine, Phase, ReselectionDecision, TdmaSchedule, reselection_decision
from .harness import Comparison, RunResult, compare, run
from .model import (
    Cluster,
    ConfigError,
    CoordinatorNode,
    Position,
    RadioEnergyModel,
    RatingWeights,
    RoundMetrics,
    SensorNode,
    distance,
    rx_energy,
    tx_energy,
)

__version__ = "0.1.0"
