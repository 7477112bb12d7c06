# coding: utf-8
import math

import numpy as np
import pytest

from mmhybrid.beamdesign import full_digital_svd, greedy_no_deflation, joint_design
from mmhybrid.channel import ArrayConfig, ChannelParams, sample_channel, steering_from_sine
from mmhybrid.exceptions import ConfigError, DimensionMismatch, SingularCombiner, ZeroCombinerColumn
from mmhybrid.linalg import hermitian
from mmhybrid.metrics import (
    DesignMetrics,
    LinkBudget,
    evaluate_design,
    per_stream_sinr,
    spectral_efficiency,
    sum_rate,
    waterfilling_capacity,
)
from mmhybrid.utils.rng import seeded_stream


@pytest.fixture()
def channel16():
    return sample_channel(ChannelParams.symmetric(16), seeded_stream(42)).h


@pytest.mark.parametrize("g", [0.5, 2.0 - 1.0j, 10.0])
def test_spectral_efficiency_scalar(g):
    budget = LinkBudget(power=2.0, noise_var=0.5, n_streams=1)
    expected = math.log2(1 + 2.0 * abs(g) ** 2 / 0.5)
    assert spectral_efficiency([[g]], [[1.0]], [[1.0]], budget) == pytest.approx(expected, rel=1e-12)


def test_spectral_efficiency_zero_channel():
    budget = LinkBudget(power=1.0, noise_var=1.0, n_streams=2)
    assert spectral_efficiency(np.zeros((4, 4)), np.eye(4)[:, :2], np.eye(4)[:, :2], budget) == 0.0


def test_spectral_efficiency_singular_combiner():
    budget = LinkBudget(power=1.0, noise_var=1.0, n_streams=2)
    w = np.ones((4, 2))
    with pytest.raises(SingularCombiner):
        spectral_efficiency(np.eye(4), np.eye(4)[:, :2], w, budget)


def test_spectral_efficiency_dimension_mismatch():
    budget = LinkBudget(power=1.0, noise_var=1.0, n_streams=1)
    with pytest.raises(DimensionMismatch):
        spectral_efficiency(np.eye(3), np.ones((4, 1)), np.ones((3, 1)), budget)


def test_spectral_efficiency_matches_determinant(channel16):
    budget = LinkBudget.from_snr_db(5.0, 2)
    design = full_digital_svd(channel16, 2)
    f, w = design.precoder, design.combiner
    rn = budget.noise_var * hermitian(w) @ w
    a = hermitian(w) @ channel16 @ f
    argument = np.eye(2) + budget.power_per_stream * np.linalg.solve(rn, a @ hermitian(a))
    expected = np.log2(np.real(np.linalg.det(argument)))
    assert spectral_efficiency(channel16, f, w, budget) == pytest.approx(expected, rel=1e-10)


def test_sinr_zero_channel():
    budget = LinkBudget(power=1.0, noise_var=1.0, n_streams=2)
    gammas = per_stream_sinr(np.zeros((4, 4)), np.eye(4)[:, :2], np.eye(4)[:, :2], budget)
    np.testing.assert_array_equal(gammas, [0.0, 0.0])


def test_sinr_zero_combiner_column():
    budget = LinkBudget(power=1.0, noise_var=1.0, n_streams=2)
    w = np.eye(4)[:, :2].copy()
    w[:, 1] = 0
    with pytest.raises(ZeroCombinerColumn):
        per_stream_sinr(np.eye(4), np.eye(4)[:, :2], w, budget)


def test_sinr_of_joint_design_has_no_interference(channel16, codebook_factory):
    cb = codebook_factory(6, 16)
    budget = LinkBudget.from_snr_db(0.0, 4)
    design = joint_design(channel16, cb, cb, 4)
    f, w = design.precoder, design.combiner
    combined = np.abs(hermitian(w) @ channel16 @ f) ** 2
    off = combined - np.diag(np.diag(combined))
    assert off.sum(axis=1).max() <= 1e-12 * combined.max()
    expected = budget.power_per_stream * np.diag(combined) / (
        budget.noise_var * np.sum(np.abs(w) ** 2, axis=0)
    )
    np.testing.assert_allclose(per_stream_sinr(channel16, f, w, budget), expected, rtol=1e-8)


def test_sinr_increases_with_power(channel16, codebook_factory):
    cb = codebook_factory(4, 16)
    design = greedy_no_deflation(channel16, cb, cb, 3)
    low = per_stream_sinr(channel16, design.precoder, design.combiner, LinkBudget(1.0, 0.1, 3))
    high = per_stream_sinr(channel16, design.precoder, design.combiner, LinkBudget(2.0, 0.1, 3))
    assert np.all(high > low)


sum_rate_cases = [
    ([0.0, 0.0, 0.0], 0.0),
    ([1.0, 1.0], 2.0),
    ([3.0], 2.0),
    ([], 0.0),
]


@pytest.mark.parametrize("gammas,expected", sum_rate_cases)
def test_sum_rate(gammas, expected):
    assert sum_rate(gammas) == pytest.approx(expected, abs=1e-12)


def test_sum_rate_nats():
    assert sum_rate([math.e - 1], nats=True) == pytest.approx(1.0)


def test_sum_rate_rejects_negative():
    with pytest.raises(ValueError):
        sum_rate([1.0, -0.5])


def test_waterfilling_single_mode():
    budget = LinkBudget(power=2.0, noise_var=0.5, n_streams=1)
    h = 3.0 * np.outer([1, 0, 0], [0, 1])
    assert waterfilling_capacity(h, budget) == pytest.approx(math.log2(1 + 2.0 * 9 / 0.5), rel=1e-9)


def test_waterfilling_equal_modes():
    budget = LinkBudget(power=1.0, noise_var=0.1, n_streams=2)
    h = 2.0 * np.eye(2)
    expected = 2 * math.log2(1 + 0.5 * 4 / 0.1)
    assert waterfilling_capacity(h, budget) == pytest.approx(expected, rel=1e-9)


def test_waterfilling_drops_weak_modes():
    # the weak mode lies above the water level at low power
    budget = LinkBudget(power=0.01, noise_var=1.0, n_streams=2)
    h = np.diag([10.0, 0.1])
    assert waterfilling_capacity(h, budget) == pytest.approx(math.log2(1 + 0.01 * 100), rel=1e-9)


def test_waterfilling_zero_channel():
    assert waterfilling_capacity(np.zeros((3, 3)), LinkBudget(1.0, 1.0, 1)) == 0.0


@pytest.mark.parametrize("snr_db", [-10.0, 0.0, 20.0])
def test_capacity_bounds_designs(channel16, codebook_factory, snr_db):
    cb = codebook_factory(6, 16)
    budget = LinkBudget.from_snr_db(snr_db, 4)
    capacity = waterfilling_capacity(channel16, budget)
    for design in (
        joint_design(channel16, cb, cb, 4),
        greedy_no_deflation(channel16, cb, cb, 4),
        full_digital_svd(channel16, 4),
    ):
        assert evaluate_design(channel16, design, budget).spectral_efficiency <= capacity + 1e-9


def test_link_budget_from_snr_db():
    budget = LinkBudget.from_snr_db(20.0, 4)
    assert budget.power == 1.0
    assert budget.noise_var == pytest.approx(0.01)
    assert budget.snr_db == pytest.approx(20.0)
    assert budget.power_per_stream == 0.25


@pytest.mark.parametrize("power,noise,streams", [(0.0, 1.0, 1), (1.0, 0.0, 1), (1.0, 1.0, 0)])
def test_link_budget_validation(power, noise, streams):
    with pytest.raises(ConfigError):
        LinkBudget(power, noise, streams)


def test_design_metrics_db():
    metrics = DesignMetrics(spectral_efficiency=1.0, sinr=np.array([100.0, 0.0]), sum_rate=1.0)
    np.testing.assert_allclose(metrics.sinr_db, [20.0, -300.0])
    assert metrics.min_sinr_db == pytest.approx(-300.0)


def test_evaluate_design(channel16):
    budget = LinkBudget.from_snr_db(10.0, 2)
    design = full_digital_svd(channel16, 2)
    metrics = evaluate_design(channel16, design, budget)
    assert metrics.sum_rate == pytest.approx(sum_rate(metrics.sinr))
    nats = evaluate_design(channel16, design, budget, nats=True)
    assert nats.sum_rate == pytest.approx(metrics.sum_rate * math.log(2))
    # no interference, so the linear receiver reaches the mutual information
    assert metrics.sum_rate == pytest.approx(metrics.spectral_efficiency, rel=1e-9)


def _hybrid_design(channel16, codebook_factory):
    cb = codebook_factory(6, 16)
    return joint_design(channel16, cb, cb, 3)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_metrics_ignore_column_phases(channel16, codebook_factory, seed):
    design = _hybrid_design(channel16, codebook_factory)
    rng = seeded_stream(seed)
    budget = LinkBudget.from_snr_db(5.0, 3)
    f_phases = np.exp(2j * np.pi * rng.random(3))
    w_phases = np.exp(2j * np.pi * rng.random(3))
    f, w = design.precoder, design.combiner
    rotated_f, rotated_w = f * f_phases, w * w_phases
    assert spectral_efficiency(channel16, rotated_f, rotated_w, budget) == pytest.approx(
        spectral_efficiency(channel16, f, w, budget), rel=1e-10
    )
    np.testing.assert_allclose(
        per_stream_sinr(channel16, rotated_f, rotated_w, budget),
        per_stream_sinr(channel16, f, w, budget),
        rtol=1e-10,
    )


def test_spectral_efficiency_grows_with_power(channel16, codebook_factory):
    design = _hybrid_design(channel16, codebook_factory)
    powers = np.logspace(-3, 3, 25)
    rates = [
        spectral_efficiency(
            channel16, design.precoder, design.combiner, LinkBudget(power=p, noise_var=1.0, n_streams=3)
        )
        for p in powers
    ]
    assert np.all(np.diff(rates) >= -1e-12)


@pytest.mark.parametrize("g1,g2", [(2.0, 1.0), (1.0, 0.3j), (5.0 - 1.0j, 4.0)])
def test_joint_design_on_orthogonal_paths_reaches_mutual_information(codebook_factory, g1, g2):
    cfg = ArrayConfig(8)
    # sin=0 and sin=1 beams are orthogonal for 8 elements
    a0, a1 = steering_from_sine(cfg, 0.0), steering_from_sine(cfg, 1.0)
    h = g1 * np.outer(a0, np.conj(a0)) + g2 * np.outer(a1, np.conj(a1))
    cb = codebook_factory(3, 8)
    design = joint_design(h, cb, cb, 2)
    budget = LinkBudget.from_snr_db(10.0, 2)
    metrics = evaluate_design(h, design, budget)
    assert metrics.sum_rate == pytest.approx(metrics.spectral_efficiency, abs=1e-6)
