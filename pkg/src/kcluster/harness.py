"""Seeded runs, paired scheme comparison and metrics CSV I/O."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from .config import SimConfig
from .engine import Engine
from .mobility import make_mobility
from .model import RoundMetrics
from .topology import Deployment, generate_topology

# fixed stream offsets under (seed, replication)
TOPOLOGY_STREAM = 0
MOBILITY_STREAM = 1
ELECTION_STREAM = 2

CSV_HEADER = [
    "round", "alive", "total_residual_j", "residual_variance",
    "msgs_data", "msgs_ctrl", "reselections", "ch_ids",
]


def stream(seed: int, replication: int, which: int) -> np.random.Generator:
    return np.random.default_rng([seed, replication, which])


@dataclass
class RunResult:
    metrics: list[RoundMetrics]
    first_node_death_round: Optional[int]  # None: no node died
    last_node_death_round: Optional[int]  # None: network survived
    total_messages: int
    final_residuals: tuple[float, ...]
    energy_trace: np.ndarray  # rounds x nodes residual energies after each round
    initial_energy: float

    def residuals_at(self, round_: int) -> np.ndarray:
        if round_ == 0:
            return np.full(self.energy_trace.shape[1], self.initial_energy)
        return self.energy_trace[round_ - 1]


def build_engine(config: SimConfig, replication: int = 0, keep_ledger: bool = False,
                 deployment: Optional[Deployment] = None) -> Engine:
    if deployment is None:
        deployment = generate_topology(config.topology_spec(), stream(config.seed, replication, TOPOLOGY_STREAM))
    mobility = make_mobility(config.mobility, deployment.regions,
                             stream(config.seed, replication, MOBILITY_STREAM))
    return Engine(config, deployment, mobility=mobility,
                  rng=stream(config.seed, replication, ELECTION_STREAM), keep_ledger=keep_ledger)


def run_engine(engine: Engine, max_rounds: int) -> RunResult:
    n = len(engine.nodes)
    metrics: list[RoundMetrics] = []
    trace = []
    first = last = None
    for _ in range(max_rounds):
        if engine.all_dead():
            break
        m = engine.step()
        metrics.append(m)
        trace.append(engine.residuals())
        if first is None and m.alive < n:
            first = m.round
        if m.alive == 0:
            last = m.round
            break
    return RunResult(
        metrics=metrics,
        first_node_death_round=first,
        last_node_death_round=last,
        total_messages=sum(m.messages_data + m.messages_ctrl for m in metrics),
        final_residuals=tuple(engine.residuals()),
        energy_trace=np.array(trace, dtype=float).reshape(len(trace), n),
        initial_energy=engine.config.initial_energy,
    )


def run(config: SimConfig, replication: int = 0) -> RunResult:
    return run_engine(build_engine(config, replication), config.max_rounds)


@dataclass(frozen=True)
class PairRow:
    replication: int
    checkpoint: int
    fnd_a: Optional[int]
    fnd_b: Optional[int]
    variance_a: float
    variance_b: float


@dataclass
class Comparison:
    schemes: tuple[str, str]
    rows: list[PairRow]

    @property
    def mean_fnd(self) -> tuple[float, float]:
        return (
            float(np.mean([_lifetime(r.fnd_a, r) for r in self.rows])),
            float(np.mean([_lifetime(r.fnd_b, r) for r in self.rows])),
        )

    @property
    def mean_variance(self) -> tuple[float, float]:
        return (
            float(np.mean([r.variance_a for r in self.rows])),
            float(np.mean([r.variance_b for r in self.rows])),
        )

    @property
    def fraction_a_lower(self) -> float:
        return sum(r.variance_a < r.variance_b for r in self.rows) / len(self.rows)


def _lifetime(fnd: Optional[int], row: PairRow) -> float:
    # a run with no death counts as lasting at least to the checkpoint horizon
    return float(fnd) if fnd is not None else float(row.checkpoint)


def checkpoint_round(a: RunResult, b: RunResult) -> int:
    """Earlier of the two first-node-death rounds; the shorter run's end if nobody died."""
    fnds = [r.first_node_death_round for r in (a, b) if r.first_node_death_round is not None]
    if fnds:
        return min(fnds)
    return min(len(a.metrics), len(b.metrics))


def _pair(args) -> PairRow:
    config, schemes, rep = args
    a = run(replace(config, scheme=schemes[0]), rep)
    b = run(replace(config, scheme=schemes[1]), rep)
    cp = checkpoint_round(a, b)
    return PairRow(
        replication=rep,
        checkpoint=cp,
        fnd_a=a.first_node_death_round,
        fnd_b=b.first_node_death_round,
        variance_a=float(np.var(a.residuals_at(cp))),
        variance_b=float(np.var(b.residuals_at(cp))),
    )


def compare(config: SimConfig, replications: int,
            schemes: Sequence[str] = ("ktheorem", "baseline"), workers: int = 1) -> Comparison:
    """Run both schemes on the same per-replication topologies and seeds."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    schemes = (schemes[0], schemes[1])
    jobs = [(config, schemes, rep) for rep in range(replications)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_pair, jobs))
    else:
        rows = [_pair(j) for j in jobs]
    return Comparison(schemes, rows)


# CSV

def _fmt(x: float) -> str:
    return format(x, ".9g")


def write_metrics_csv(metrics: Iterable[RoundMetrics], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for m in metrics:
        w.writerow([
            m.round, m.alive, _fmt(m.total_residual), _fmt(m.residual_variance),
            m.messages_data, m.messages_ctrl, m.reselection_events,
            ";".join(str(c) for c in m.ch_ids),
        ])


def metrics_to_csv(metrics: Iterable[RoundMetrics]) -> str:
    buf = io.StringIO()
    write_metrics_csv(metrics, buf)
    return buf.getvalue()


def read_metrics_csv(fh: TextIO) -> list[RoundMetrics]:
    reader = csv.DictReader(fh)
    if reader.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        ids = tuple(int(c) for c in row["ch_ids"].split(";")) if row["ch_ids"] else ()
        out.append(RoundMetrics(
            round=int(row["round"]),
            alive=int(row["alive"]),
            total_residual=float(row["total_residual_j"]),
            residual_variance=float(row["residual_variance"]),
            messages_data=int(row["msgs_data"]),
            messages_ctrl=int(row["msgs_ctrl"]),
            ch_ids=ids,
            reselection_events=int(row["reselections"]),
        ))
    return out


COMPARISON_HEADER = ["replication", "checkpoint", "fnd_a", "fnd_b", "variance_a", "variance_b"]


def comparison_to_csv(comp: Comparison) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    a, b = comp.schemes
    w.writerow([h.replace("_a", f"_{a}").replace("_b", f"_{b}") for h in COMPARISON_HEADER])
    for r in comp.rows:
        w.writerow([
            r.replication, r.checkpoint,
            "" if r.fnd_a is None else r.fnd_a,
            "" if r.fnd_b is None else r.fnd_b,
            _fmt(r.variance_a), _fmt(r.variance_b),
        ])
    return buf.getvalue()
