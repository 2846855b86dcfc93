"""Scenario configuration, CSIT-quality models, and channel generation.

A scenario is one overloaded downlink: N transmit antennas serving K > N
single-antenna users over i.i.d. Rayleigh fading, with the transmitter
holding an imperfect channel estimate h = sqrt(eps^2) h_hat +
sqrt(1 - eps^2) e and per-user large-scale gains v_k in (0, 1].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

CSIT_MODELS = ("perfect", "fixed_eps", "scaling")
MRT_CASES = ("case1", "case2", "auto")


@dataclass(frozen=True)
class CsitModel:
    """CSIT quality law: perfect, fixed eps, or SNR-scaling 1 - P^-tau."""

    kind: str = "perfect"
    eps: float = 1.0    # estimate correlation, used by fixed_eps
    tau: float = 0.0    # quality exponent, used by scaling

    def __post_init__(self):
        if self.kind not in CSIT_MODELS:
            raise ValueError(f"unknown CSIT model {self.kind!r}")
        if self.kind == "fixed_eps" and not 0.0 <= self.eps <= 1.0:
            raise ValueError("fixed_eps requires eps in [0, 1]")
        if self.kind == "scaling" and not self.tau > 0.0:
            raise ValueError("scaling requires tau > 0")


@dataclass(frozen=True)
class SystemConfig:
    """All parameters of one simulated scenario."""

    n_tx: int                     # N transmit antennas
    n_users: int                  # K single-antenna users, K > N
    power: float = 100.0          # total transmit power P, linear
    csit: CsitModel = field(default_factory=CsitModel)
    v_min: float = 0.1            # lower edge of the large-scale gain law
    large_scale: Union[str, tuple] = "sample_uniform"
    beta_fraction: float = 0.98   # fraction of 1/K used by the capped rate split
    lambda_gate: float = 0.3      # minimum private power level P*t accepted by gated candidates
    mrt_case: str = "auto"
    group_rule: str = "first_n_indices"
    realizations: int = 100
    seed: int = 0
    common_mode: str = "dominant_eigvec"   # or "random"
    resample_large_scale: bool = True      # redraw v_k each realization

    def __post_init__(self):
        if self.n_tx < 1:
            raise ValueError("n_tx must be >= 1")
        if self.n_users <= self.n_tx:
            raise ValueError("overloaded regime requires n_users > n_tx")
        if not self.power > 0.0:
            raise ValueError("power must be positive")
        if not 0.0 < self.v_min <= 1.0:
            raise ValueError("v_min must be in (0, 1]")
        if not 0.0 <= self.beta_fraction < 1.0:
            raise ValueError("beta_fraction must be in [0, 1)")
        if self.lambda_gate < 0.0:
            raise ValueError("lambda_gate must be >= 0")
        if self.mrt_case not in MRT_CASES:
            raise ValueError(f"unknown mrt_case {self.mrt_case!r}")
        if self.group_rule != "first_n_indices":
            raise ValueError(f"unknown group_rule {self.group_rule!r}")
        if self.common_mode not in ("dominant_eigvec", "random"):
            raise ValueError(f"unknown common_mode {self.common_mode!r}")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if not isinstance(self.large_scale, str):
            vs = tuple(float(v) for v in self.large_scale)
            if len(vs) != self.n_users:
                raise ValueError("explicit large_scale must list one gain per user")
            if any(not 0.0 < v <= 1.0 for v in vs):
                raise ValueError("large-scale gains must lie in (0, 1]")
            object.__setattr__(self, "large_scale", vs)
        elif self.large_scale != "sample_uniform":
            raise ValueError(f"unknown large_scale rule {self.large_scale!r}")


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of true channels, CSIT, error terms, and large-scale gains.

    Arrays are (K, N) complex for h/h_hat/e and (K,) real for v; the
    identity h = sqrt(eps_sq) h_hat + sqrt(1 - eps_sq) e holds entrywise.
    """

    h: np.ndarray
    h_hat: np.ndarray
    e: np.ndarray
    v: np.ndarray
    eps_sq: float


def effective_csit_quality(cfg: SystemConfig, power: float) -> float:
    """eps^2 in effect at the given power level, clamped to [0, 1]."""
    if not power > 0.0:
        raise ValueError("power must be positive")
    model = cfg.csit
    if model.kind == "perfect":
        return 1.0
    if model.kind == "fixed_eps":
        return model.eps ** 2
    return min(max(1.0 - power ** (-model.tau), 0.0), 1.0)


def sample_large_scale(cfg: SystemConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw K gains i.i.d. U[v_min, 1], forcing one user to each endpoint."""
    k = cfg.n_users
    if k < 2:
        raise ValueError("endpoint forcing needs at least two users")
    v = rng.uniform(cfg.v_min, 1.0, size=k)
    lo, hi = rng.choice(k, size=2, replace=False)
    v[lo] = cfg.v_min
    v[hi] = 1.0
    return v


def _cn_matrix(rng: np.random.Generator, k: int, n: int) -> np.ndarray:
    """(k, n) i.i.d. CN(0,1) entries: real/imag parts each variance 1/2."""
    re = rng.standard_normal((k, n))
    im = rng.standard_normal((k, n))
    return (re + 1j * im) / np.sqrt(2.0)


def sample_realization(
    cfg: SystemConfig,
    power: float,
    rng: np.random.Generator,
    v: Optional[np.ndarray] = None,
) -> ChannelRealization:
    """Draw CSIT and error, compose the true channel, attach gains."""
    eps_sq = effective_csit_quality(cfg, power)
    h_hat = _cn_matrix(rng, cfg.n_users, cfg.n_tx)
    e = _cn_matrix(rng, cfg.n_users, cfg.n_tx)
    h = np.sqrt(eps_sq) * h_hat + np.sqrt(1.0 - eps_sq) * e
    if v is None:
        if isinstance(cfg.large_scale, tuple):
            v = np.asarray(cfg.large_scale, dtype=float)
        else:
            v = sample_large_scale(cfg, rng)
    return ChannelRealization(h=h, h_hat=h_hat, e=e, v=np.asarray(v, float), eps_sq=eps_sq)


def substream(seed: int, *path: int) -> np.random.Generator:
    """Counter-based RNG substream for (seed, *path); parallel-safe."""
    ss = np.random.SeedSequence((int(seed),) + tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def resolve_mrt_case(cfg: SystemConfig, power: float, v_min: float) -> str:
    """Pick the quadratic family used for the MRT allocation candidates.

    auto follows the reported operating split: the small-array regime
    stays interference-limited early (case2); very large arrays switch to
    case1 once the worst-user SNR clears 25 dB.
    """
    if cfg.mrt_case != "auto":
        return cfg.mrt_case
    if cfg.n_tx < 64:
        return "case2"
    snr_min_db = 10.0 * np.log10(power * v_min)
    return "case1" if snr_min_db > 25.0 else "case2"


def config_from_dict(data: dict) -> SystemConfig:
    """Build a SystemConfig from the documented JSON key-value schema."""
    data = dict(data)
    csit_raw = data.pop("csit_model", {"type": "perfect"})
    if isinstance(csit_raw, str):
        csit_raw = {"type": csit_raw}
    kind = csit_raw.get("type", "perfect")
    csit = CsitModel(
        kind=kind,
        eps=float(csit_raw.get("eps", 1.0)),
        tau=float(csit_raw.get("tau", 0.0)),
    )
    known = {
        "n_tx": int,
        "n_users": int,
        "power": float,
        "v_min": float,
        "beta_fraction": float,
        "lambda_gate": float,
        "mrt_case": str,
        "group_rule": str,
        "realizations": int,
        "seed": int,
        "common_mode": str,
        "resample_large_scale": bool,
    }
    kwargs = {}
    for key, cast in known.items():
        if key in data:
            kwargs[key] = cast(data.pop(key))
    if "large_scale" in data:
        kwargs["large_scale"] = data.pop("large_scale")
    if data:
        raise ValueError(f"unknown config keys: {sorted(data)}")
    return SystemConfig(csit=csit, **kwargs)


def load_config(path: str) -> SystemConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))

