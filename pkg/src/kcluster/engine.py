"""Round-by-round protocol driver.

Each round a cluster either re-elects its head (setup phase) or keeps it and
exchanges maintenance messages; then every cluster runs a TDMA steady phase
where members uplink to their head, which aggregates and uplinks to the
coordinator node.  The end-of-round reselection decision picks the next
round's phase per cluster.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import ktheorem, rating
from .config import SimConfig
from .model import (
    MAX_CONSECUTIVE_TERMS,
    Cluster,
    CoordinatorNode,
    NodeId,
    RoundMetrics,
    SensorNode,
    distance,
    rx_energy,
    tx_energy,
)
from .topology import Deployment


class Phase(enum.Enum):
    SETUP = "setup"
    STEADY = "steady"
    MAINTENANCE = "maintenance"


class ReselectionDecision(enum.Enum):
    CONTINUE = "continue"
    RESELECT = "reselect"
    FORCED_RESELECT = "forced-reselect"


@dataclass(frozen=True)
class TdmaSchedule:
    cluster: int
    slots: tuple[tuple[NodeId, int], ...]


@dataclass(frozen=True)
class EnergyEvent:
    round: int
    phase: Phase
    kind: str
    node: NodeId
    cluster: int  # cluster whose traffic caused the debit
    joules: float


@dataclass
class SetupReport:
    cluster: int
    scheme: str
    n_alive: int
    k: int
    selection: Optional[ktheorem.KSelection]
    polled: tuple[NodeId, ...]
    ratings: dict[NodeId, float]
    head: Optional[NodeId]
    head_alive_at_election: bool
    messages: int
    silenced: int = 0  # planned node transmissions dropped because the sender died mid-setup
    died: tuple[NodeId, ...] = ()


def reselection_decision(head: SensorNode, e_prev: float, cluster_alive: int, k: int) -> ReselectionDecision:
    """Whether a head keeps its role for the next round.

    A head continues while its residual energy covers twice last round's
    drain and it has served fewer than two consecutive rounds.  Otherwise a
    reselection is requested, but only when the cluster has at least k + 1
    live nodes to choose from.
    """
    if not head.alive or head.consecutive_ch_terms >= MAX_CONSECUTIVE_TERMS:
        return ReselectionDecision.FORCED_RESELECT
    if e_prev < 0:
        raise ValueError("e_prev must be non-negative")
    if head.residual_energy >= 2.0 * e_prev:
        return ReselectionDecision.CONTINUE
    if cluster_alive >= k + 1:
        return ReselectionDecision.RESELECT
    return ReselectionDecision.CONTINUE


def build_schedule(cluster: Cluster, nodes: dict[NodeId, SensorNode]) -> TdmaSchedule:
    members = [m for m in sorted(cluster.members) if m != cluster.head and nodes[m].alive]
    return TdmaSchedule(cluster.id, tuple((m, i) for i, m in enumerate(members)))


class Engine:
    def __init__(self, config: SimConfig, deployment: Deployment, mobility=None,
                 rng: Optional[np.random.Generator] = None, keep_ledger: bool = False):
        self.config = config
        self.model = config.energy
        self.cn = CoordinatorNode(deployment.cn)
        self.d_max = config.field_diagonal
        window = config.mobility.window
        self.nodes: dict[NodeId, SensorNode] = {
            nid: SensorNode(nid, pos, config.initial_energy, deployment.cluster_of(nid),
                            failure_rate=config.failure_rate, history_window=window)
            for nid, pos in deployment.positions.items()
        }
        self.clusters = [Cluster(cid, sorted(m)) for cid, m in enumerate(deployment.clusters)]
        self.mobility = mobility
        self.rng = rng if rng is not None else np.random.default_rng(config.seed)
        self.keep_ledger = keep_ledger

        self.round = 0
        self.pending = {c.id: ReselectionDecision.RESELECT for c in self.clusters}
        self.schedules: dict[int, TdmaSchedule] = {}
        self.ledger: list[EnergyEvent] = []
        self.round_events: list[EnergyEvent] = []
        self.setup_reports: list[SetupReport] = []
        self.phases: dict[int, Phase] = {}
        self.lost_payloads = 0
        self.delivered_payloads = 0
        self.total_debited = 0.0
        self._msgs_ctrl = 0
        self._msgs_data = 0
        self._phase = Phase.SETUP
        self._epoch_len = math.ceil(1.0 / config.r)
        self._served: dict[int, set[NodeId]] = {c.id: set() for c in self.clusters}
        self._epoch: dict[int, int] = {c.id: -1 for c in self.clusters}
        self._selection_cache: dict[int, tuple] = {}

    # accounting

    def _debit(self, node: SensorNode, joules: float, kind: str, cluster: int) -> bool:
        """Charge a node; True when it could afford the whole operation."""
        residual = node.residual_energy
        if residual <= 0:
            return False
        if joules >= residual:
            node.residual_energy = 0.0
            taken = residual
        else:
            node.residual_energy = residual - joules
            taken = joules
        self.total_debited += taken
        if self.keep_ledger:
            self.round_events.append(EnergyEvent(self.round, self._phase, kind, node.id, cluster, taken))
        return residual >= joules

    def _tx(self, node, bits, d, kind, cluster) -> bool:
        return self._debit(node, tx_energy(self.model, bits, d), kind, cluster)

    def _rx(self, node, bits, kind, cluster) -> bool:
        return self._debit(node, bits * self.model.e_elec, kind, cluster)

    def alive_members(self, cluster: Cluster) -> list[NodeId]:
        nodes = self.nodes
        return [m for m in cluster.members if nodes[m].residual_energy > 0]

    def _cn_distance(self, node: SensorNode) -> float:
        return distance(node.position, self.cn.position)

    def _assign_terms(self, cluster: Cluster, head: Optional[NodeId], previous: Optional[NodeId]) -> None:
        for m in cluster.members:
            node = self.nodes[m]
            if m != head:
                node.consecutive_ch_terms = 0
            elif m == previous and node.consecutive_ch_terms < MAX_CONSECUTIVE_TERMS:
                node.consecutive_ch_terms += 1
            else:
                node.consecutive_ch_terms = 1
        cluster.head = head

    def _broadcast_to(self, cluster: Cluster, kind: str) -> None:
        self._msgs_ctrl += 1
        for m in self.alive_members(cluster):
            self._rx(self.nodes[m], self.model.ctrl_bits, kind, cluster.id)

    # phases

    def setup_phase(self, cluster: Cluster, t: int) -> SetupReport:
        """Elect a head for one cluster through the candidate vote and ratings."""
        self._phase = Phase.SETUP
        msgs0 = self._msgs_ctrl
        previous = cluster.head
        alive = self.alive_members(cluster)
        n = len(alive)
        if n == 0:
            cluster.extinct = True
            self._assign_terms(cluster, None, previous)
            return SetupReport(cluster.id, "ktheorem", 0, 0, None, (), {}, None, False, 0)
        if n == 1:
            cluster.k = 0
            head = alive[0]
            self._assign_terms(cluster, head, previous)
            self._broadcast_to(cluster, "confirm")
            return SetupReport(cluster.id, "ktheorem", 1, 0, None, (), {}, head, True,
                               self._msgs_ctrl - msgs0)

        k = ktheorem.cluster_k(n, self.config.r)
        cluster.k = k
        self._broadcast_to(cluster, "k_broadcast")
        silenced = 0
        for m in alive:
            node = self.nodes[m]
            if node.alive:
                self._msgs_ctrl += 1
                self._tx(node, self.model.ctrl_bits, self._cn_distance(node), "neighbor_list", cluster.id)
            else:
                silenced += 1

        # lists lost with a sender that died transmitting never reach the CN
        reported = [m for m in alive if self.nodes[m].alive]
        if not reported:
            self._assign_terms(cluster, None, previous)
            self._broadcast_to(cluster, "confirm")
            return SetupReport(cluster.id, "ktheorem", n, k, None, (), {}, None, False,
                               self._msgs_ctrl - msgs0, silenced, tuple(alive))
        positions = {m: self.nodes[m].position for m in reported}
        key = (k, tuple(positions.items()))
        cached = self._selection_cache.get(cluster.id)
        if cached is not None and cached[0] == key:
            sel = cached[1]
        else:
            sel = ktheorem.select_candidates(cluster.id, positions, k)
            self._selection_cache[cluster.id] = (key, sel)
        terms = {m: self.nodes[m].consecutive_ch_terms for m in alive}

        def eligible(v):
            return terms[v] < MAX_CONSECUTIVE_TERMS and self.nodes[v].alive

        polled = [v for v in sorted(sel.candidates) if eligible(v)]
        if not polled:
            polled = [v for v in reported if v not in sel.candidates and eligible(v)]

        ratings: dict[NodeId, float] = {}
        mob = self.config.mobility
        for v in polled:
            node = self.nodes[v]
            self._msgs_ctrl += 1
            self._rx(node, self.model.ctrl_bits, "cr_request", cluster.id)
            if not node.alive:
                silenced += 1
                continue
            inputs = rating.rating_inputs(node, self.cn, self.d_max, t, mob.window, mob.v_max)
            cr = rating.combined_rating(inputs, self.config.weights)
            self._msgs_ctrl += 1
            ok = self._tx(node, self.model.ctrl_bits, self._cn_distance(node), "cr_reply", cluster.id)
            if ok and node.alive:
                ratings[v] = cr

        head = None
        if ratings:
            cands = [v for v in sel.candidates if v in ratings or terms[v] >= MAX_CONSECUTIVE_TERMS]
            head = rating.elect_head(cands or list(ratings), ratings, terms)
        head_alive = head is not None and self.nodes[head].alive
        self._assign_terms(cluster, head, previous)
        self._broadcast_to(cluster, "confirm")
        died = tuple(m for m in alive if not self.nodes[m].alive)
        return SetupReport(cluster.id, "ktheorem", n, k, sel, tuple(polled), ratings, head,
                           head_alive, self._msgs_ctrl - msgs0, silenced, died)

    def baseline_random_rotation(self, cluster: Cluster, t: int) -> SetupReport:
        """Uniform pick among members that have not headed in this rotation epoch."""
        self._phase = Phase.SETUP
        msgs0 = self._msgs_ctrl
        previous = cluster.head
        alive = self.alive_members(cluster)
        n = len(alive)
        if n == 0:
            cluster.extinct = True
            self._assign_terms(cluster, None, previous)
            return SetupReport(cluster.id, "baseline", 0, 0, None, (), {}, None, False, 0)
        epoch = (t - 1) // self._epoch_len
        if epoch != self._epoch[cluster.id]:
            self._epoch[cluster.id] = epoch
            self._served[cluster.id] = set()
        pool = [m for m in alive if m not in self._served[cluster.id]]
        if not pool:
            # more rounds per epoch than live members: restart the epoch early
            self._served[cluster.id] = set()
            pool = alive
        head = pool[int(self.rng.integers(len(pool)))]
        self._served[cluster.id].add(head)
        cluster.k = ktheorem.cluster_k(n, self.config.r)
        if n > 1:
            self._broadcast_to(cluster, "k_broadcast")
        head_alive = self.nodes[head].alive
        self._assign_terms(cluster, head, previous)
        self._broadcast_to(cluster, "confirm")
        return SetupReport(cluster.id, "baseline", n, cluster.k, None, (), {}, head, head_alive,
                           self._msgs_ctrl - msgs0)

    def maintenance_phase(self, cluster: Cluster) -> None:
        """Keep the head; every live member pays one fixed maintenance exchange."""
        self._phase = Phase.MAINTENANCE
        head = self.nodes[cluster.head]
        if head.consecutive_ch_terms < MAX_CONSECUTIVE_TERMS:
            head.consecutive_ch_terms += 1
        for m in self.alive_members(cluster):
            self._msgs_ctrl += 1
            self._rx(self.nodes[m], self.model.ctrl_bits, "maintenance", cluster.id)

    def steady_phase(self) -> int:
        """TDMA data collection in every cluster; returns payloads delivered to the CN."""
        self._phase = Phase.STEADY
        model = self.model
        bits = model.packet_bits
        delivered = 0
        self.schedules = {}
        for cluster in self.clusters:
            if cluster.extinct or cluster.head is None:
                continue
            head = self.nodes[cluster.head]
            if not head.alive:
                self.lost_payloads += 1
                continue
            sched = build_schedule(cluster, self.nodes)
            self.schedules[cluster.id] = sched
            received = 0
            for m, _slot in sched.slots:
                if not head.alive:
                    break
                node = self.nodes[m]
                if not node.alive:
                    continue
                self._msgs_data += 1
                sent = self._tx(node, bits, distance(node.position, head.position), "data_uplink", cluster.id)
                if sent and self._rx(head, bits, "data_rx", cluster.id):
                    received += 1
            if head.alive and received:
                self._debit(head, model.e_agg * bits * received, "aggregate", cluster.id)
            if not head.alive:
                self.lost_payloads += 1
                continue
            self._msgs_data += 1
            if self._tx(head, bits, self._cn_distance(head), "ch_uplink", cluster.id):
                delivered += received + 1
            else:
                self.lost_payloads += 1
        self.delivered_payloads += delivered
        return delivered

    # round driver

    def step(self) -> RoundMetrics:
        self.round += 1
        t = self.round
        self.round_events = []
        self.setup_reports = []
        self.phases = {}
        self._msgs_ctrl = self._msgs_data = 0
        if t > 1 and self.mobility is not None:
            self.mobility.advance(self.nodes.values())

        start_residual = {nid: n.residual_energy for nid, n in self.nodes.items()}
        reselections = 0
        for cluster in self.clusters:
            if cluster.extinct:
                continue
            if not self.alive_members(cluster):
                cluster.extinct = True
                self._assign_terms(cluster, None, cluster.head)
                continue
            baseline = self.config.scheme == "baseline"
            if baseline or self.pending[cluster.id] != ReselectionDecision.CONTINUE:
                reselections += 1
                self.phases[cluster.id] = Phase.SETUP
                if baseline:
                    report = self.baseline_random_rotation(cluster, t)
                else:
                    report = self.setup_phase(cluster, t)
                self.setup_reports.append(report)
            else:
                self.phases[cluster.id] = Phase.MAINTENANCE
                self.maintenance_phase(cluster)

        ch_ids = tuple(-1 if c.head is None else c.head for c in self.clusters)
        self.steady_phase()

        for cluster in self.clusters:
            if cluster.extinct:
                continue
            alive_count = len(self.alive_members(cluster))
            if alive_count == 0:
                cluster.extinct = True
                self._assign_terms(cluster, None, cluster.head)
                continue
            if cluster.head is None:
                self.pending[cluster.id] = ReselectionDecision.FORCED_RESELECT
                continue
            head = self.nodes[cluster.head]
            e_prev = start_residual[head.id] - head.residual_energy
            self.pending[cluster.id] = reselection_decision(head, e_prev, alive_count, cluster.k)

        if self.keep_ledger:
            self.ledger.extend(self.round_events)
        residuals = np.array([self.nodes[i].residual_energy for i in sorted(self.nodes)])
        return RoundMetrics(
            round=t,
            alive=int(np.count_nonzero(residuals > 0)),
            total_residual=math.fsum(residuals),
            residual_variance=float(np.var(residuals)),
            messages_data=self._msgs_data,
            messages_ctrl=self._msgs_ctrl,
            ch_ids=ch_ids,
            reselection_events=reselections,
        )

    def residuals(self) -> list[float]:
        return [self.nodes[i].residual_energy for i in sorted(self.nodes)]

    def all_dead(self) -> bool:
        return not any(n.alive for n in self.nodes.values())
