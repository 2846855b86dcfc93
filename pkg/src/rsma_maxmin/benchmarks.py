"""SDMA baselines: one-shot grouped transmission and time-slot scheduling.

One-shot schemes transmit every stream simultaneously with no common
stream (t = 1) and an equal 1/K power split. Scheduled schemes serve
ceil(K/N) index-contiguous groups in successive slots at full power and
pay the 1/slots time-sharing penalty on the rate.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

from .channel import ChannelRealization, SystemConfig
from .precoders import group_zf_precoders, mrt_precoders
from .rates import RateReport

ONE_SHOT_SCHEMES = ("sdma_zf_grouping", "sdma_mrt")
SCHEDULED_SCHEMES = ("sdma_scheduling_zf", "sdma_scheduling_mrt")


def index_groups(n_users: int, n_tx: int) -> List[Tuple[int, ...]]:
    """Partition users into ceil(K/N) index-contiguous groups of size <= N."""
    n_groups = math.ceil(n_users / n_tx)
    base, rem = divmod(n_users, n_groups)
    groups = []
    start = 0
    for g in range(n_groups):
        size = base + (1 if g < rem else 0)
        groups.append(tuple(range(start, start + size)))
        start += size
    return groups


def _grouped_precoders(real: ChannelRealization, cfg: SystemConfig,
                       kind: str) -> np.ndarray:
    """(K, N) per-user beams; ZF nulls only within each index group."""
    k, n = cfg.n_users, cfg.n_tx
    privates = np.zeros((k, n), dtype=complex)
    if kind == "mrt":
        privates[:] = mrt_precoders(real.h_hat)
    else:
        for group in index_groups(k, n):
            idx = list(group)
            privates[idx] = group_zf_precoders(real.h_hat[idx])
    return privates


def sdma_one_shot(real: ChannelRealization, scheme: str,
                  cfg: SystemConfig, power: float) -> RateReport:
    """Per-realization rates for simultaneous SDMA with equal power split."""
    if scheme not in ONE_SHOT_SCHEMES:
        raise ValueError(f"unknown one-shot scheme {scheme!r}")
    k, n = cfg.n_users, cfg.n_tx
    groups = index_groups(k, n)
    if max(len(g) for g in groups) > n:
        raise ValueError("ZF group larger than the antenna count")
    privates = _grouped_precoders(real, cfg, "mrt" if scheme == "sdma_mrt" else "zf")
    mu = 1.0 / k
    cross = np.abs(real.h.conj() @ privates.T) ** 2
    own = np.diag(cross)
    interference = cross.sum(axis=1) - own
    gamma = mu * power * real.v * own / (1.0 + mu * power * real.v * interference)
    rates = np.log2(1.0 + gamma)
    return RateReport(common_rate=0.0, private_rates=rates,
                      maxmin_rate=float(rates.min()), n_samples=1)


def sdma_scheduled(real: ChannelRealization, scheme: str,
                   cfg: SystemConfig, power: float) -> RateReport:
    """Per-realization rates for slot-scheduled SDMA at full per-slot power."""
    if scheme not in SCHEDULED_SCHEMES:
        raise ValueError(f"unknown scheduled scheme {scheme!r}")
    k, n = cfg.n_users, cfg.n_tx
    groups = index_groups(k, n)
    n_slots = len(groups)
    kind = "mrt" if scheme.endswith("mrt") else "zf"
    rates = np.zeros(k)
    for group in groups:
        idx = list(group)
        h_hat = real.h_hat[idx]
        beams = mrt_precoders(h_hat) if kind == "mrt" else group_zf_precoders(h_hat)
        h = real.h[idx]
        v = real.v[idx]
        mu = 1.0 / len(idx)
        cross = np.abs(h.conj() @ beams.T) ** 2
        own = np.diag(cross)
        interference = cross.sum(axis=1) - own
        gamma = mu * power * v * own / (1.0 + mu * power * v * interference)
        rates[idx] = np.log2(1.0 + gamma) / n_slots
    return RateReport(common_rate=0.0, private_rates=rates,
                      maxmin_rate=float(rates.min()), n_samples=1)
