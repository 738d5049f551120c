import math
import random

import pytest

from kcluster.model import (
    ConfigError,
    Position,
    RadioEnergyModel,
    RatingWeights,
    RoundMetrics,
    SensorNode,
    distance,
    rx_energy,
    tx_energy,
)

M = RadioEnergyModel(e_elec=50e-9, eps_amp=100e-12)


def test_distance_examples():
    assert distance(Position(0, 0), Position(0, 0)) == 0
    assert distance(Position(0, 0), Position(3, 4)) == 5


def test_distance_matches_coordinates():
    rng = random.Random(3)
    for _ in range(200):
        a = Position(rng.uniform(-50, 50), rng.uniform(-50, 50))
        b = Position(rng.uniform(-50, 50), rng.uniform(-50, 50))
        expect = math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2)
        assert distance(a, b) == pytest.approx(expect, rel=1e-15)
        assert distance(a, b) == distance(b, a)


def test_position_rejects_nonfinite():
    with pytest.raises(ValueError):
        Position(float("nan"), 0)


def test_tx_energy_examples():
    assert tx_energy(M, 1000, 0) == pytest.approx(5.0e-5, rel=1e-12)
    # 1000 * (50e-9 + 100e-12 * 1e4) = 1000 * 1.05e-6
    assert tx_energy(M, 1000, 100) == pytest.approx(1.05e-3, rel=1e-12)
    amp = lambda d: tx_energy(M, 1000, d) - tx_energy(M, 1000, 0)
    assert amp(60) == pytest.approx(4 * amp(30), rel=1e-12)
    with pytest.raises(ValueError):
        tx_energy(M, 1000, -1)


def test_tx_strictly_increasing_in_distance():
    ds = [0, 0.5, 1, 10, 50, 87.3]
    costs = [tx_energy(M, 2000, d) for d in ds]
    assert costs == sorted(costs) and len(set(costs)) == len(costs)


def test_rx_energy_examples():
    with pytest.raises(ValueError):
        rx_energy(M, 0)
    assert rx_energy(M, 1) == M.e_elec
    assert rx_energy(M, 1000) == pytest.approx(5.0e-5, rel=1e-12)
    assert rx_energy(M, 1234) == tx_energy(M, 1234, 0)


def test_debit_floor_marks_dead():
    n = SensorNode(0, Position(0, 0), initial_energy=1.0, cluster=0)
    assert n.debit(0.4) == 0.4
    assert n.alive
    taken = n.debit(5.0)
    assert taken == pytest.approx(0.6)
    assert n.residual_energy == 0.0 and not n.alive
    assert n.debit(1.0) == 0.0


def test_weights_must_sum_to_one():
    RatingWeights(0.25, 0.25, 0.25, 0.25)
    with pytest.raises(ConfigError):
        RatingWeights(0.5, 0.5, 0.5, 0.0)
    with pytest.raises(ConfigError):
        RatingWeights(1.2, -0.2, 0, 0)


def test_round_metrics_hold_nine_digits():
    m = RoundMetrics(1, 10, 1.23456789012345, 2.0 / 3.0, 1, 2, (0, 1), 0)
    assert m.total_residual == 1.23456789
    assert m.residual_variance == float("0.666666667")
