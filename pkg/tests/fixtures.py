"""Engine fixtures shared by the engine and acceptance tests."""

import math

import numpy as np

from kcluster.config import SimConfig
from kcluster.engine import Engine
from kcluster.model import Position
from kcluster.topology import Deployment

E_ELEC, EPS, E_AGG, PKT, CTRL = 50e-9, 100e-12, 5e-9, 2000, 200


def tx(bits, d):
    return bits * (E_ELEC + EPS * d * d)


def rx(bits):
    return bits * E_ELEC


def make_engine(clusters, cn=(50.0, 50.0), keep_ledger=True, motion=None, **overrides):
    """clusters: list of {node_id: (x, y)}"""
    positions = {}
    members = []
    for c in clusters:
        members.append(sorted(c))
        positions.update({i: Position(*xy) for i, xy in c.items()})
    cfg = SimConfig(cluster_count=len(clusters), nodes_per_cluster=[len(c) for c in clusters],
                    **overrides)
    dep = Deployment(positions, members, Position(*cn), [(0, 0, 100, 100)] * len(clusters))
    return Engine(cfg, dep, mobility=motion, rng=np.random.default_rng(0), keep_ledger=keep_ledger)


SIX = [
    {0: (0.0, 0.0), 1: (10.0, 0.0), 2: (40.0, 0.0)},
    {3: (0.0, 50.0), 4: (6.0, 50.0), 5: (20.0, 50.0)},
]
SIX_CN = (10.0, 25.0)


def hand_ledger_six():
    """Every debit of round one, walked by hand: node, joules."""
    cn = SIX_CN
    setup, steady = [], []
    for cluster, head in ((SIX[0], 1), (SIX[1], 4)):
        ids = sorted(cluster)
        d_cn = {i: math.dist(cluster[i], cn) for i in ids}
        setup += [(i, rx(CTRL)) for i in ids]  # k broadcast
        setup += [(i, tx(CTRL, d_cn[i])) for i in ids]  # neighbour lists to CN
        setup += [(head, rx(CTRL)), (head, tx(CTRL, d_cn[head]))]  # CR request / reply
        setup += [(i, rx(CTRL)) for i in ids]  # confirmation
        for m in ids:
            if m != head:
                steady += [(m, tx(PKT, math.dist(cluster[m], cluster[head]))), (head, rx(PKT))]
        steady += [(head, E_AGG * PKT * 2), (head, tx(PKT, d_cn[head]))]
    return setup + steady


def six_engine():
    return make_engine(SIX, cn=SIX_CN, r=0.3, initial_energy=1.0)
