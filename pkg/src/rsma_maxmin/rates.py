"""Instantaneous SINRs, Monte Carlo ergodic rates, and max-min objectives.

Noise variance is fixed to 1, so the transmit power P doubles as SNR.
Rates are reported in bits/s/Hz (log base 2); the common-stream rate is
the multicast rate, i.e. the log of one plus the worst common SINR across
all K users in every fading state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .channel import ChannelRealization, SystemConfig, sample_realization
from .precoders import PrecoderSet, rsma_precoder_set


@dataclass
class RateReport:
    """Ergodic common/private/max-min rates with Monte Carlo statistics."""

    common_rate: float
    private_rates: np.ndarray          # (K,) per-user ergodic private rates
    maxmin_rate: float = 0.0
    n_samples: int = 1
    std_err: float = 0.0               # standard error of the max-min estimate
    private_std_err: Optional[np.ndarray] = field(default=None, repr=False)
    common_std_err: float = 0.0


def instantaneous_sinrs(
    real: ChannelRealization,
    pre: PrecoderSet,
    t: float,
    power: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Per-user common and private SINRs for one fading state.

    gamma_c,k = P(1-t) v_k |h_k^H p_c|^2 / (1 + P t v_k sum_j mu_j |h_k^H p_j|^2)
    gamma_k   = mu_k P t v_k |h_k^H p_k|^2 / (1 + P t v_k sum_{j!=k} mu_j |h_k^H p_j|^2)
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("power split t must lie in [0, 1]")
    h = real.h
    v = real.v
    cross = np.abs(h.conj() @ pre.privates.T) ** 2      # (K, K): |h_k^H p_j|^2
    own = np.diag(cross)
    weighted = cross @ pre.mu                            # sum_j mu_j |h_k^H p_j|^2
    c_gain = np.abs(h.conj() @ pre.common) ** 2
    gamma_c = power * (1.0 - t) * v * c_gain / (1.0 + power * t * v * weighted)
    interference = weighted - pre.mu * own               # drop the own beam
    gamma_p = pre.mu * power * t * v * own / (1.0 + power * t * v * interference)
    return gamma_c, gamma_p


def ergodic_rates_mc(
    cfg: SystemConfig,
    scheme: str,
    t: float,
    n_mc: int,
    rng: np.random.Generator,
    power: Optional[float] = None,
    common_mode: Optional[str] = None,
) -> RateReport:
    """Monte Carlo ergodic rates for a fixed scheme and power split.

    Common rate averages log2(1 + min_k gamma_c,k) over realizations; the
    private rates average per user. The reduction is a fixed-order indexed
    mean, so results are bit-stable for a given generator state.
    """
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    p = cfg.power if power is None else power
    mode = cfg.common_mode if common_mode is None else common_mode
    k = cfg.n_users
    common_samples = np.empty(n_mc)
    private_samples = np.empty((n_mc, k))
    for i in range(n_mc):
        real = sample_realization(cfg, p, rng)
        pre = rsma_precoder_set(real.h_hat, scheme, common_mode=mode, rng=rng)
        gamma_c, gamma_p = instantaneous_sinrs(real, pre, t, p)
        common_samples[i] = np.log2(1.0 + gamma_c.min())
        private_samples[i] = np.log2(1.0 + gamma_p)
    report = RateReport(
        common_rate=float(common_samples.mean()),
        private_rates=private_samples.mean(axis=0),
        n_samples=n_mc,
        common_std_err=float(common_samples.std(ddof=1) / np.sqrt(n_mc)) if n_mc > 1 else 0.0,
        private_std_err=(private_samples.std(axis=0, ddof=1) / np.sqrt(n_mc)) if n_mc > 1 else np.zeros(k),
    )
    return report


def maxmin_objective_zf(report: RateReport, beta: float, cfg: SystemConfig) -> float:
    """Two-group split objective: min of the group-1 and group-2 rates.

    Group 1 (first N users) receives beta * Rc on top of its worst private
    rate; group 2 shares the remaining (1 - N beta) of the common rate.
    """
    n, k = cfg.n_tx, cfg.n_users
    if not 0.0 <= beta < 1.0 / n:
        raise ValueError(f"beta must lie in [0, 1/N), got {beta}")
    rc = report.common_rate
    worst_private = float(np.min(report.private_rates[:n]))
    return min(beta * rc + worst_private, (1.0 - n * beta) / (k - n) * rc)


def maxmin_objective_mrt(report: RateReport, cfg: SystemConfig) -> float:
    """Single-group objective: equal common share plus worst private rate."""
    rc = report.common_rate
    return rc / cfg.n_users + float(np.min(report.private_rates))
