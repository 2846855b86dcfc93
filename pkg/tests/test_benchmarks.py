"""SDMA baseline tests: grouping, nulling, scheduling accounting."""

import numpy as np
import pytest

from rsma_maxmin.benchmarks import index_groups, sdma_one_shot, sdma_scheduled
from rsma_maxmin.channel import SystemConfig, sample_realization, substream


def test_index_groups_partition():
    assert index_groups(8, 4) == [(0, 1, 2, 3), (4, 5, 6, 7)]
    assert index_groups(24, 8) == [tuple(range(0, 8)), tuple(range(8, 16)),
                                   tuple(range(16, 24))]
    groups = index_groups(40, 32)
    assert [len(g) for g in groups] == [20, 20]
    assert index_groups(7, 4) == [(0, 1, 2, 3), (4, 5, 6)]
    for k, n in ((8, 4), (24, 8), (40, 32), (7, 4), (5, 2)):
        groups = index_groups(k, n)
        flat = [u for g in groups for u in g]
        assert flat == list(range(k))
        assert max(len(g) for g in groups) <= n


def test_scheduled_slots_are_interference_free_under_perfect_csit():
    # groups of exactly N users with perfect CSIT: exact within-slot nulling
    cfg = SystemConfig(n_tx=4, n_users=8, seed=0, large_scale=(1.0,) * 8)
    real = sample_realization(cfg, 16.0, substream(1, 0))
    rep = sdma_scheduled(real, "sdma_scheduling_zf", cfg, 16.0)
    assert np.all(rep.private_rates > 0)
    from rsma_maxmin.precoders import group_zf_precoders
    for group in index_groups(8, 4):
        idx = list(group)
        beams = group_zf_precoders(real.h_hat[idx])
        own = np.abs(np.einsum("kn,kn->k", np.conj(real.h[idx]), beams)) ** 2
        expect = np.log2(1.0 + 16.0 / 4 * own) / 2.0
        assert np.allclose(rep.private_rates[idx], expect, rtol=1e-10)


def test_one_shot_zf_within_group_nulling():
    cfg = SystemConfig(n_tx=4, n_users=8, seed=0, large_scale=(1.0,) * 8)
    real = sample_realization(cfg, 10.0, substream(2, 0))
    from rsma_maxmin.benchmarks import _grouped_precoders
    privates = _grouped_precoders(real, cfg, "zf")
    cross = np.abs(np.conj(real.h_hat) @ privates.T)
    for group in index_groups(8, 4):
        for j in group:
            for m in group:
                if j != m:
                    assert cross[j, m] <= 1e-10   # within-group nulled
    # cross-group interference strictly positive
    assert cross[0, 5] > 1e-6


def test_one_shot_vanishes_at_zero_power():
    cfg = SystemConfig(n_tx=4, n_users=8, seed=0)
    real = sample_realization(cfg, 1.0, substream(3, 0))
    for scheme in ("sdma_zf_grouping", "sdma_mrt"):
        rep = sdma_one_shot(real, scheme, cfg, 1e-12)
        assert rep.maxmin_rate == pytest.approx(0.0, abs=1e-9)


def test_scheduled_is_half_of_interference_free_rate():
    # K = 2N, perfect CSIT, ZF scheduling: per-user rate is half the
    # single-slot interference-free rate
    cfg = SystemConfig(n_tx=4, n_users=8, seed=0, large_scale=(0.7,) * 8)
    real = sample_realization(cfg, 20.0, substream(4, 0))
    rep = sdma_scheduled(real, "sdma_scheduling_zf", cfg, 20.0)
    from rsma_maxmin.precoders import group_zf_precoders
    for group in index_groups(8, 4):
        idx = list(group)
        beams = group_zf_precoders(real.h_hat[idx])
        own = np.abs(np.einsum("kn,kn->k", np.conj(real.h[idx]), beams)) ** 2
        full = np.log2(1.0 + 20.0 / 4 * 0.7 * own)
        assert np.allclose(rep.private_rates[idx], full / 2.0, rtol=1e-9)


def test_scheduled_time_share_accounting():
    # per-user scheduled rate times the slot count equals the rate the
    # user's slot would achieve on its own at full power
    cfg = SystemConfig(n_tx=4, n_users=8, seed=0, large_scale=(0.5,) * 8)
    real = sample_realization(cfg, 10.0, substream(5, 0))
    rep = sdma_scheduled(real, "sdma_scheduling_mrt", cfg, 10.0)
    from rsma_maxmin.precoders import mrt_precoders
    for group in index_groups(8, 4):
        idx = list(group)
        beams = mrt_precoders(real.h_hat[idx])
        cross = np.abs(np.conj(real.h[idx]) @ beams.T) ** 2
        own = np.diag(cross)
        interf = cross.sum(axis=1) - own
        mu = 1.0 / len(idx)
        gamma = mu * 10.0 * 0.5 * own / (1.0 + mu * 10.0 * 0.5 * interf)
        assert np.allclose(rep.private_rates[idx] * 2, np.log2(1 + gamma), rtol=1e-10)


def test_one_shot_equal_power_split():
    cfg = SystemConfig(n_tx=4, n_users=8, seed=0, large_scale=(1.0,) * 8)
    real = sample_realization(cfg, 8.0, substream(6, 0))
    rep = sdma_one_shot(real, "sdma_mrt", cfg, 8.0)
    from rsma_maxmin.precoders import mrt_precoders
    beams = mrt_precoders(real.h_hat)
    cross = np.abs(np.conj(real.h) @ beams.T) ** 2
    own = np.diag(cross)
    interference = cross.sum(axis=1) - own
    gamma = (8.0 / 8) * own / (1.0 + (8.0 / 8) * interference)
    assert np.allclose(rep.private_rates, np.log2(1 + gamma), rtol=1e-12)
    assert rep.maxmin_rate == pytest.approx(rep.private_rates.min())


def test_unknown_scheme_rejected():
    cfg = SystemConfig(n_tx=4, n_users=8, seed=0)
    real = sample_realization(cfg, 1.0, substream(7, 0))
    with pytest.raises(ValueError):
        sdma_one_shot(real, "sdma_scheduling_zf", cfg, 1.0)
    with pytest.raises(ValueError):
        sdma_scheduled(real, "sdma_mrt", cfg, 1.0)
