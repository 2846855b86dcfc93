"""SNR sweeps, scheme orchestration, and CSV emission.

The x-axis is the average SNR of the weakest-gain user, so the transmit
power at a sweep point is P = 10^(snr/10) / v_min. All schemes at one
point share the same channel realizations (paired comparison), and every
random draw comes from a counter-based substream keyed by (seed, point,
realization), so results are bit-identical for a given config and seed
regardless of evaluation order.

The reported max-min rate is the smallest per-user ergodic total rate:
each realization credits every user its common-stream share plus its
private rate under that realization's allocation, the per-user totals
are averaged over realizations, and the minimum over users is taken
(the common share is a split of the instantaneous multicast rate, so
ergodic rates follow the formulation's min-after-expectation order).
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .allocation import closed_form_candidates, select_allocation
from .benchmarks import sdma_one_shot, sdma_scheduled
from .channel import (ChannelRealization, SystemConfig, effective_csit_quality,
                      sample_large_scale, sample_realization, substream)
from .precoders import rsma_precoder_set
from .rates import instantaneous_sinrs
from .search import GridSpec, default_grid, exhaustive_search

ALL_SCHEMES = (
    "rsma_proposed",
    "rsma_exhaustive",
    "sdma_zf_grouping",
    "sdma_mrt",
    "sdma_scheduling_zf",
    "sdma_scheduling_mrt",
)

CSV_HEADER = ("snr_db,scheme,maxmin_rate_bps_hz,common_rate,min_private_rate,"
              "t,beta,candidate_n,std_err,n_realizations,seed")


@dataclass(frozen=True)
class SweepSpec:
    """SNR sweep plan over a list of schemes."""

    snr_min_db: float = 0.0
    snr_max_db: float = 40.0
    snr_step_db: float = 5.0
    schemes: Sequence[str] = ("rsma_proposed", "sdma_zf_grouping", "sdma_mrt")
    realizations: int = 100
    grid: Optional[GridSpec] = None    # only used by rsma_exhaustive

    def __post_init__(self):
        if not self.snr_step_db > 0.0:
            raise ValueError("snr_step_db must be positive")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        expanded = []
        for s in self.schemes:
            if s == "sdma_scheduled":    # shorthand for both scheduled kinds
                expanded += ["sdma_scheduling_zf", "sdma_scheduling_mrt"]
            elif s in ALL_SCHEMES:
                expanded.append(s)
            else:
                raise ValueError(f"unknown scheme {s!r}")
        object.__setattr__(self, "schemes", tuple(expanded))

    def snr_points(self) -> np.ndarray:
        n = int(math.floor((self.snr_max_db - self.snr_min_db) / self.snr_step_db + 1e-9))
        return self.snr_min_db + self.snr_step_db * np.arange(n + 1)


@dataclass
class SweepRow:
    snr_db: float
    scheme: str
    maxmin_rate: float
    common_rate: float
    min_private_rate: float
    t: float
    beta: Optional[float]
    candidate_n: Optional[int]
    std_err: float
    n_realizations: int
    seed: int


def _config_v_min(cfg: SystemConfig) -> float:
    if isinstance(cfg.large_scale, tuple):
        return min(cfg.large_scale)
    return cfg.v_min


def _draw_batch(cfg: SystemConfig, power: float, point_idx: int,
                n_real: int) -> List[ChannelRealization]:
    """Shared realizations for one sweep point (paired across schemes)."""
    fixed_v = None
    if not cfg.resample_large_scale and not isinstance(cfg.large_scale, tuple):
        fixed_v = sample_large_scale(cfg, substream(cfg.seed, point_idx, 1 << 20))
    batch = []
    for r in range(n_real):
        rng = substream(cfg.seed, point_idx, r)
        batch.append(sample_realization(cfg, power, rng, v=fixed_v))
    return batch


def _user_totals(gamma_c: np.ndarray, gamma_p: np.ndarray, scheme: str,
                 beta: Optional[float], cfg: SystemConfig):
    """Per-user total rates (common share + private) for one realization."""
    n, k = cfg.n_tx, cfg.n_users
    rc = float(np.log2(1.0 + gamma_c.min()))
    private = np.log2(1.0 + gamma_p)
    totals = np.empty(k)
    if scheme == "ZF":
        totals[:n] = beta * rc + private[:n]
        totals[n:] = (1.0 - n * beta) / (k - n) * rc
        worst_private = float(private[:n].min())
    else:
        totals[:] = rc / k + private
        worst_private = float(private.min())
    return totals, rc, worst_private


def _reduce_rows(totals: np.ndarray, rc: np.ndarray, worst: np.ndarray,
                 cfg: SystemConfig) -> SweepRow:
    """min-over-users of the per-user ergodic totals, with its std error."""
    n_real = totals.shape[0]
    per_user = totals.mean(axis=0)
    argmin = int(np.argmin(per_user))
    se = float(totals[:, argmin].std(ddof=1) / math.sqrt(n_real)) if n_real > 1 else 0.0
    return SweepRow(
        snr_db=0.0, scheme="", maxmin_rate=float(per_user[argmin]),
        common_rate=float(rc.mean()), min_private_rate=float(worst.mean()),
        t=1.0, beta=None, candidate_n=None, std_err=se,
        n_realizations=n_real, seed=cfg.seed)


def _evaluate_rsma(cfg: SystemConfig, power: float, eps_sq: float,
                   batch: List[ChannelRealization], proposed: bool,
                   grid: Optional[GridSpec], point_idx: int) -> SweepRow:
    n_real = len(batch)
    totals = np.empty((n_real, cfg.n_users))
    rc = np.empty(n_real)
    worst = np.empty(n_real)
    ts = np.empty(n_real)
    betas: List[float] = []
    picks: Counter = Counter()
    for r, real in enumerate(batch):
        if proposed:
            cand = select_allocation(
                closed_form_candidates(cfg, power, real.v, eps_sq))
            scheme, t, beta, n_idx = cand.scheme, cand.t, cand.beta, cand.index
        else:
            res = exhaustive_search(cfg, power, real.v, eps_sq, grid)
            scheme, t, beta, n_idx = res.scheme, res.t, res.beta, None
        rng = substream(cfg.seed, point_idx, r, 1)   # precoder randomness only
        pre = rsma_precoder_set(real.h_hat, scheme,
                                common_mode=cfg.common_mode, rng=rng)
        gamma_c, gamma_p = instantaneous_sinrs(real, pre, t, power)
        totals[r], rc[r], worst[r] = _user_totals(gamma_c, gamma_p, scheme, beta, cfg)
        ts[r] = t
        if beta is not None:
            betas.append(beta)
        if n_idx is not None:
            picks[n_idx] += 1
    candidate_n = None
    if picks:
        top = max(picks.values())
        candidate_n = min(n for n, c in picks.items() if c == top)
    row = _reduce_rows(totals, rc, worst, cfg)
    row.t = float(ts.mean())
    row.beta = float(np.mean(betas)) if betas else None
    row.candidate_n = candidate_n
    return row


def _evaluate_sdma(cfg: SystemConfig, power: float,
                   batch: List[ChannelRealization], scheme: str) -> SweepRow:
    n_real = len(batch)
    totals = np.empty((n_real, cfg.n_users))
    worst = np.empty(n_real)
    for r, real in enumerate(batch):
        if scheme in ("sdma_zf_grouping", "sdma_mrt"):
            rep = sdma_one_shot(real, scheme, cfg, power)
        else:
            rep = sdma_scheduled(real, scheme, cfg, power)
        totals[r] = rep.private_rates
        worst[r] = float(rep.private_rates.min())
    row = _reduce_rows(totals, np.zeros(n_real), worst, cfg)
    row.scheme = scheme
    return row


def run_sweep(cfg: SystemConfig, sweep: SweepSpec) -> List[SweepRow]:
    """One row per (SNR point, scheme), all schemes sharing realizations."""
    v_min = _config_v_min(cfg)
    grid = sweep.grid
    if grid is None and "rsma_exhaustive" in sweep.schemes:
        grid = default_grid(cfg)
    rows: List[SweepRow] = []
    for point_idx, snr_db in enumerate(sweep.snr_points()):
        power = 10.0 ** (snr_db / 10.0) / v_min
        eps_sq = effective_csit_quality(cfg, power)
        batch = _draw_batch(cfg, power, point_idx, sweep.realizations)
        for scheme in sweep.schemes:
            if scheme == "rsma_proposed":
                row = _evaluate_rsma(cfg, power, eps_sq, batch, True, None, point_idx)
            elif scheme == "rsma_exhaustive":
                row = _evaluate_rsma(cfg, power, eps_sq, batch, False, grid, point_idx)
            else:
                row = _evaluate_sdma(cfg, power, batch, scheme)
            row.snr_db = float(snr_db)
            row.scheme = scheme
            rows.append(row)
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def render_csv(rows: Sequence[SweepRow]) -> str:
    """CSV text with rows sorted by (scheme, snr_db), 9 significant digits."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in sorted(rows, key=lambda r: (r.scheme, r.snr_db)):
        fields = [
            _fmt(row.snr_db), row.scheme, _fmt(row.maxmin_rate),
            _fmt(row.common_rate), _fmt(row.min_private_rate), _fmt(row.t),
            _fmt(row.beta), _fmt(row.candidate_n), _fmt(row.std_err),
            _fmt(row.n_realizations), _fmt(row.seed),
        ]
        buf.write(",".join(fields) + "\n")
    return buf.getvalue()


def emit_csv(rows: Sequence[SweepRow], path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_csv(rows))
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def parse_csv(text: str) -> List[Dict[str, str]]:
    """Round-trip helper for the emitted CSV."""
    reader = csv.DictReader(io.StringIO(text))
    return list(reader)
