"""Per-round node mobility."""

from __future__ import annotations

import math
from typing import Iterable, Optional

import numpy as np

from .config import MobilitySpec
from .model import Position, SensorNode
from .topology import Region


class RandomWaypoint:
    """Each node walks to a waypoint drawn inside its cluster's region at a
    per-leg speed in [v_max/2, v_max], then pauses for `pause` rounds."""

    def __init__(self, spec: MobilitySpec, regions: list[Region], rng: np.random.Generator):
        self.spec = spec
        self.regions = regions
        self.rng = rng
        self._target: dict[int, Optional[tuple[float, float, float]]] = {}
        self._pause: dict[int, int] = {}

    def _new_leg(self, node: SensorNode) -> tuple[float, float, float]:
        x0, y0, x1, y1 = self.regions[node.cluster]
        tx = float(self.rng.uniform(x0, x1))
        ty = float(self.rng.uniform(y0, y1))
        speed = float(self.rng.uniform(0.5 * self.spec.v_max, self.spec.v_max))
        return tx, ty, speed

    def advance(self, nodes: Iterable[SensorNode]) -> None:
        for node in sorted(nodes, key=lambda n: n.id):
            if not node.alive:
                continue
            if self._pause.get(node.id, 0) > 0:
                self._pause[node.id] -= 1
                node.move_to(node.position)
                continue
            leg = self._target.get(node.id)
            if leg is None:
                leg = self._target[node.id] = self._new_leg(node)
            tx, ty, speed = leg
            dx, dy = tx - node.position.x, ty - node.position.y
            dist = math.hypot(dx, dy)
            if dist <= speed:
                node.move_to(Position(tx, ty))
                self._target[node.id] = None
                self._pause[node.id] = self.spec.pause
            else:
                f = speed / dist
                node.move_to(Position(node.position.x + f * dx, node.position.y + f * dy))


class Static:
    def advance(self, nodes: Iterable[SensorNode]) -> None:
        pass


def make_mobility(spec: MobilitySpec, regions: list[Region], rng: np.random.Generator):
    if spec.mode == "static":
        return Static()
    return RandomWaypoint(spec, regions, rng)
