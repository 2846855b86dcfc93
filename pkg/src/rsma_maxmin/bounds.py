"""Closed-form lower bounds and approximations of the ergodic rates.

Each precoding family carries a five-term parameter set (eta, theta, D,
rho, tau) built from a Gamma moment-matching of its SINR numerator. The
common-stream bounds come in three regimes: the exact eta form, a
small-private-power harmonic form, and a high-private-power asymptote.
Internals use natural logs; outputs convert to bits at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .specfun import EULER_GAMMA, digamma, exp_scaled_em_sum

COMMON_REGIMES = ("exact_eta", "small_pt", "high_pt")
_LOG2 = math.log(2.0)


def round_half_away(x: float) -> int:
    """Round a positive real half away from zero."""
    if x < 0.0:
        raise ValueError("round operation only used on positive arguments")
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class MrtTerms:
    """Bound parameters for the all-user MRT design at one eps^2 (and t)."""

    theta: float
    d: float
    m_round: int                # rounded D*K, the E_m summation length
    rho: float
    inv_v_sum: float            # sum_k 1/v_k
    eta: Optional[float] = None     # needs t > 0
    tau: Optional[float] = None     # needs t > 0


@dataclass(frozen=True)
class ZfTerms:
    """Bound parameters for the two-group ZF design at one eps^2 (and t)."""

    theta: float
    d: float
    m_round: int                # rounded N*(K - N + D)
    rho: float
    inv_v_sum: float
    eta: Optional[float] = None
    tau: Optional[float] = None


def _tau_sum(m_round: int, x: float) -> float:
    """sum_{j=0}^{M-1} 1/(x + j), the harmonic window capping the eta sum."""
    return float(np.sum(1.0 / (x + np.arange(m_round))))


def _rho(prefactor: float, m_round: int) -> float:
    if m_round < 2:
        raise ValueError("rounded Gamma shape too small for the high-power form")
    return prefactor / (m_round - 1) * math.exp(-EULER_GAMMA - 0.5 / (m_round - 1))


def mrt_terms(
    n_tx: int,
    n_users: int,
    power: float,
    v: np.ndarray,
    eps_sq: float,
    t: Optional[float] = None,
) -> MrtTerms:
    """Parameter family for MRT precoding under CSIT quality eps_sq.

    The signal mixture mean N eps^2 + (1 - eps^2) + K - 1 and second
    moment N eps^4 + (1 - eps^2)^2 + K - 1 define theta and D; eta and
    tau additionally need the power split t in (0, 1].
    """
    n, k = n_tx, n_users
    if not 0.0 <= eps_sq <= 1.0:
        raise ValueError("eps_sq must lie in [0, 1]")
    mean = n * eps_sq + (1.0 - eps_sq) + k - 1.0
    second = n * eps_sq ** 2 + (1.0 - eps_sq) ** 2 + k - 1.0
    theta = second / mean
    d = mean * mean / second
    m_round = round_half_away(d * k)
    rho = _rho(k / theta, m_round)
    inv_v_sum = float(np.sum(1.0 / np.asarray(v, float)))
    eta = tau = None
    if t is not None:
        if not 0.0 < t <= 1.0:
            raise ValueError("t must lie in (0, 1] for the eta/tau terms")
        x = k * inv_v_sum / (power * theta * t)
        eta = -EULER_GAMMA - math.log(inv_v_sum) - exp_scaled_em_sum(m_round, x)
        tau = _tau_sum(m_round, x)
    return MrtTerms(theta=theta, d=d, m_round=m_round, rho=rho,
                    inv_v_sum=inv_v_sum, eta=eta, tau=tau)


def zf_terms(
    n_tx: int,
    n_users: int,
    power: float,
    v: np.ndarray,
    eps_sq: float,
    t: Optional[float] = None,
) -> ZfTerms:
    """Parameter family for two-group ZF precoding under CSIT quality eps_sq."""
    n, k = n_tx, n_users
    if not 0.0 <= eps_sq <= 1.0:
        raise ValueError("eps_sq must lie in [0, 1]")
    mean = eps_sq * (1.0 - n) + n
    second = eps_sq ** 2 * (1.0 + n) + (1.0 - 2.0 * eps_sq) * n
    theta = second / mean
    d = mean * mean / second
    m_round = round_half_away(n * (k - n + d))
    rho = _rho(float(n), m_round)
    inv_v_sum = float(np.sum(1.0 / np.asarray(v, float)))
    eta = tau = None
    if t is not None:
        if not 0.0 < t <= 1.0:
            raise ValueError("t must lie in (0, 1] for the eta/tau terms")
        x = n * inv_v_sum / (power * t)
        eta = -EULER_GAMMA - math.log(inv_v_sum) - exp_scaled_em_sum(m_round, x)
        tau = _tau_sum(m_round, x)
    return ZfTerms(theta=theta, d=d, m_round=m_round, rho=rho,
                   inv_v_sum=inv_v_sum, eta=eta, tau=tau)


def _high_pt_form(rho: float, t: float) -> float:
    if not t > 0.0:
        raise ValueError("high-power common form needs t > 0")
    return math.log1p(rho / t - rho) / _LOG2


def common_lb_mrt(terms: MrtTerms, n_users: int, power: float, t: float,
                  regime: str = "exact_eta") -> float:
    """Common-stream rate lower bound for the MRT design."""
    if regime not in COMMON_REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    if regime == "high_pt":
        return _high_pt_form(terms.rho, t)
    if regime == "small_pt":
        k = n_users
        num = k * math.exp(-EULER_GAMMA) * power * (1.0 - t)
        den = power * terms.theta * terms.m_round * t + k * terms.inv_v_sum
        return math.log1p(num / den) / _LOG2
    if terms.eta is None:
        raise ValueError("exact_eta regime needs terms built with t > 0")
    return math.log1p(power * (1.0 - t) * math.exp(terms.eta)) / _LOG2


def common_lb_zf(terms: ZfTerms, n_tx: int, power: float, t: float,
                 regime: str = "exact_eta") -> float:
    """Common-stream rate lower bound for the two-group ZF design."""
    if regime not in COMMON_REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    if regime == "high_pt":
        return _high_pt_form(terms.rho, t)
    if regime == "small_pt":
        n = n_tx
        num = n * math.exp(-EULER_GAMMA) * power * (1.0 - t)
        den = power * terms.m_round * t + n * terms.inv_v_sum
        return math.log1p(num / den) / _LOG2
    if terms.eta is None:
        raise ValueError("exact_eta regime needs terms built with t > 0")
    return math.log1p(power * (1.0 - t) * math.exp(terms.eta)) / _LOG2


def private_lb_mrt(terms: MrtTerms, n_users: int, power: float, t: float,
                   v_k: float) -> float:
    """Private-stream rate bound for an MRT-served user with gain v_k.

    Signal and interference both ride the 1/K private power share, so at
    eps^2 = 1 this is exactly log2((1 + alpha t)/(1 + lambda t)) with
    alpha = v P/K e^{psi(N+K-1)} and lambda = v P (K-1)/K.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    k = n_users
    share = power * t / k * v_k
    signal = share * terms.theta * math.exp(digamma(terms.d))
    interference = share * (k - 1.0)
    return (math.log1p(signal) - math.log1p(interference)) / _LOG2


def private_lb_zf(terms: ZfTerms, n_tx: int, power: float, t: float,
                  v_k: float, eps_sq: float) -> float:
    """Private-stream rate bound for a group-1 user under the ZF design."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    n = n_tx
    share = power * t / n * v_k
    signal = share * terms.theta * math.exp(digamma(terms.d))
    interference = share * (n - 1.0) * (1.0 - eps_sq)
    return (math.log1p(signal) - math.log1p(interference)) / _LOG2


def tau_common_form(inv_v_sum: float, tau: float, power: float, t: float) -> float:
    """Middle member of the small-power chain: the harmonic-window bound."""
    return math.log1p(power * (1.0 - t) * math.exp(-EULER_GAMMA - math.log(inv_v_sum) - tau)) / _LOG2


def zf_bound_objective(n_tx: int, n_users: int, power: float, v: np.ndarray,
                       eps_sq: float, t: float, beta: float) -> float:
    """Two-group max-min objective under the exact-eta and private bounds.

    min(beta*Rc + R_worst, (1 - N beta)/(K - N) * Rc) with Rc from the
    exact-eta common bound and R_worst the private bound at the smallest
    group-1 gain. This is the single consistent metric used to compare
    allocations across regimes.
    """
    n, k = n_tx, n_users
    v = np.asarray(v, float)
    terms = zf_terms(n, k, power, v, eps_sq, t=t)
    rc = common_lb_zf(terms, n, power, t, regime="exact_eta")
    rp = private_lb_zf(terms, n, power, t, float(np.min(v[:n])), eps_sq)
    return min(beta * rc + rp, (1.0 - n * beta) / (k - n) * rc)


def mrt_bound_objective(n_tx: int, n_users: int, power: float, v: np.ndarray,
                        eps_sq: float, t: float) -> float:
    """Single-group max-min objective under the exact-eta and private bounds."""
    n, k = n_tx, n_users
    v = np.asarray(v, float)
    terms = mrt_terms(n, k, power, v, eps_sq, t=t)
    rc = common_lb_mrt(terms, k, power, t, regime="exact_eta")
    rp = private_lb_mrt(terms, k, power, t, float(np.min(v)))
    return rc / k + rp


def prop_small_pt_gate_mrt(terms: MrtTerms, n_users: int, power: float, t: float) -> bool:
    """Validity gate of the MRT small-power chain: (Pt)^2 <= K sum(1/v)/theta."""
    return (power * t) ** 2 <= n_users * terms.inv_v_sum / terms.theta


def lemma_small_pt_gate_zf(terms: ZfTerms, n_tx: int, power: float, t: float) -> bool:
    """Validity gate of the ZF small-power chain: Pt <= N sum(1/v)."""
    return power * t <= n_tx * terms.inv_v_sum
