"""Deployment generation: node positions, cluster membership and CN placement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TopologySpec
from .model import Position

Region = tuple[float, float, float, float]  # xmin, ymin, xmax, ymax


@dataclass
class Deployment:
    positions: dict[int, Position]
    clusters: list[list[int]]
    cn: Position
    regions: list[Region]

    def cluster_of(self, node_id: int) -> int:
        for cid, members in enumerate(self.clusters):
            if node_id in members:
                return cid
        raise KeyError(node_id)


def _cells(spec: TopologySpec) -> list[Region]:
    c = spec.cluster_count
    cols = math.ceil(math.sqrt(c))
    rows = math.ceil(c / cols)
    w, h = spec.field_width / cols, spec.field_height / rows
    cells = []
    for j in range(c):
        cx, cy = j % cols, j // cols
        cells.append((cx * w, cy * h, (cx + 1) * w, (cy + 1) * h))
    return cells


def generate_topology(spec: TopologySpec, rng: np.random.Generator) -> Deployment:
    """Place every cluster's members in its own grid cell of the field.

    uniform: members uniform over the cell.
    gaussian-clustered: members normal around a jittered cell centre, with a
    per-cluster spread drawn in [0.5, 1.5] x cluster_spread, clipped to the field.
    """
    cells = _cells(spec)
    positions: dict[int, Position] = {}
    clusters: list[list[int]] = []
    nid = 0
    for (x0, y0, x1, y1), n in zip(cells, spec.nodes_per_cluster):
        if spec.mode == "uniform":
            xs = rng.uniform(x0, x1, n)
            ys = rng.uniform(y0, y1, n)
        else:
            cx = rng.uniform(x0 + 0.25 * (x1 - x0), x1 - 0.25 * (x1 - x0))
            cy = rng.uniform(y0 + 0.25 * (y1 - y0), y1 - 0.25 * (y1 - y0))
            sigma = spec.cluster_spread * rng.uniform(0.5, 1.5)
            xs = np.clip(rng.normal(cx, sigma, n), 0.0, spec.field_width)
            ys = np.clip(rng.normal(cy, sigma, n), 0.0, spec.field_height)
        members = []
        for x, y in zip(xs, ys):
            positions[nid] = Position(float(x), float(y))
            members.append(nid)
            nid += 1
        clusters.append(members)

    if spec.cn_position == "centroid":
        cn = Position(
            float(np.mean([p.x for p in positions.values()])),
            float(np.mean([p.y for p in positions.values()])),
        )
    else:
        cn = Position(*spec.cn_position)
    return Deployment(positions, clusters, cn, cells)
