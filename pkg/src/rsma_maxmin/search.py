"""Exhaustive grid search over (t, beta) used as the validation oracle.

The grid objective uses the same analytic rate bounds the closed forms
are derived from (exact-eta common bound plus the private-rate bounds),
so any closed-form candidate evaluated under this objective can never
beat the grid maximum on a grid containing its point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import (common_lb_mrt, common_lb_zf, mrt_bound_objective,
                     mrt_terms, private_lb_mrt, private_lb_zf,
                     zf_bound_objective, zf_terms)
from .channel import SystemConfig

FAMILIES = ("ZF", "MRT", "both")


@dataclass(frozen=True)
class GridSpec:
    """Explicit evaluation grid; values must be sorted ascending."""

    t_values: np.ndarray
    beta_values: np.ndarray
    family: str = "both"

    def __post_init__(self):
        object.__setattr__(self, "t_values", np.asarray(self.t_values, float))
        object.__setattr__(self, "beta_values", np.asarray(self.beta_values, float))
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.t_values.size == 0:
            raise ValueError("empty t grid")
        if np.any(self.t_values <= 0.0) or np.any(self.t_values > 1.0):
            raise ValueError("t grid must lie in (0, 1]")


@dataclass(frozen=True)
class SearchResult:
    scheme: str
    t: float
    beta: Optional[float]
    rate: float


def default_grid(cfg: SystemConfig, family: str = "both",
                 fineness: int = 1) -> GridSpec:
    """Default profile: 144 t points (72 log + 72 linear), 0.001 beta step.

    `fineness` multiplies the point counts for oracle cross-checks; the
    beta step shrinks by the same factor.
    """
    n_log = 72 * fineness
    n_lin = 72 * fineness
    t_log = np.geomspace(1e-6, 1e-1, n_log)
    t_lin = np.linspace(1e-1, 1.0, n_lin + 1)[1:]
    t_values = np.concatenate([t_log, t_lin])
    step = 0.001 / fineness
    count = math.ceil(1.0 / (step * cfg.n_users))
    beta_values = np.arange(count) * step
    return GridSpec(t_values=t_values, beta_values=beta_values, family=family)


def refine_grid(grid: GridSpec, factor: int = 2) -> GridSpec:
    """Superset refinement: keeps every point and inserts midpoints."""
    def densify(vals: np.ndarray) -> np.ndarray:
        out = list(vals)
        for _ in range(factor - 1):
            mids = (np.asarray(out[:-1]) + np.asarray(out[1:])) / 2.0
            out = sorted(set(out) | set(mids.tolist()))
        return np.asarray(out)

    return GridSpec(t_values=densify(grid.t_values),
                    beta_values=densify(grid.beta_values) if grid.beta_values.size
                    else grid.beta_values,
                    family=grid.family)


def zf_objective_grid(n_tx: int, n_users: int, power: float, v: np.ndarray,
                      eps_sq: float, t_values: np.ndarray,
                      beta_values: np.ndarray) -> np.ndarray:
    """Bound-based two-group objective on the full (t, beta) grid.

    Returns an array of shape (len(t_values), len(beta_values)).
    """
    n, k = n_tx, n_users
    v = np.asarray(v, float)
    v_worst = float(np.min(v[:n]))
    rc = np.empty(len(t_values))
    rp = np.empty(len(t_values))
    for i, t in enumerate(t_values):
        terms = zf_terms(n, k, power, v, eps_sq, t=float(t))
        rc[i] = common_lb_zf(terms, n, power, float(t), regime="exact_eta")
        rp[i] = private_lb_zf(terms, n, power, float(t), v_worst, eps_sq)
    beta = beta_values[None, :]
    branch1 = beta * rc[:, None] + rp[:, None]
    branch2 = (1.0 - n * beta) / (k - n) * rc[:, None]
    return np.minimum(branch1, branch2)


def mrt_objective_grid(n_tx: int, n_users: int, power: float, v: np.ndarray,
                       eps_sq: float, t_values: np.ndarray) -> np.ndarray:
    """Bound-based single-group objective on the t grid."""
    n, k = n_tx, n_users
    v = np.asarray(v, float)
    v_worst = float(np.min(v))
    out = np.empty(len(t_values))
    for i, t in enumerate(t_values):
        terms = mrt_terms(n, k, power, v, eps_sq, t=float(t))
        rc = common_lb_mrt(terms, k, power, float(t), regime="exact_eta")
        rp = private_lb_mrt(terms, k, power, float(t), v_worst)
        out[i] = rc / k + rp
    return out


def bound_objective(cfg: SystemConfig, power: float, v: np.ndarray, eps_sq: float,
                    scheme: str, t: float, beta: Optional[float]) -> float:
    """The search objective at a single point, for cross-checking candidates."""
    if scheme == "ZF":
        return zf_bound_objective(cfg.n_tx, cfg.n_users, power, v, eps_sq, t, beta)
    if scheme == "MRT":
        return mrt_bound_objective(cfg.n_tx, cfg.n_users, power, v, eps_sq, t)
    raise ValueError(f"unknown scheme {scheme!r}")


def exhaustive_search(cfg: SystemConfig, power: float, v: np.ndarray,
                      eps_sq: float, grid: GridSpec) -> SearchResult:
    """Best (scheme, t, beta) over the grid under the bound objective.

    Ties resolve toward the earlier grid point (row-major argmax) and the
    ZF family, so the result is deterministic.
    """
    best: Optional[SearchResult] = None
    if grid.family in ("ZF", "both") and grid.beta_values.size:
        f = zf_objective_grid(cfg.n_tx, cfg.n_users, power, v, eps_sq,
                              grid.t_values, grid.beta_values)
        i, j = np.unravel_index(int(np.argmax(f)), f.shape)
        best = SearchResult("ZF", float(grid.t_values[i]),
                            float(grid.beta_values[j]), float(f[i, j]))
    if grid.family in ("MRT", "both"):
        f = mrt_objective_grid(cfg.n_tx, cfg.n_users, power, v, eps_sq,
                               grid.t_values)
        i = int(np.argmax(f))
        cand = SearchResult("MRT", float(grid.t_values[i]), None, float(f[i]))
        if best is None or cand.rate > best.rate:
            best = cand
    if best is None:
        raise ValueError("search grid selected no family")
    return best
