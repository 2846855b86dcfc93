"""Built-in invariant suite behind the `selftest` CLI command.

A quick smoke layer, not the full pytest suite: each check prints one
PASS/FAIL line and the runner returns a nonzero exit code on any failure.
"""

from __future__ import annotations

import math

import numpy as np

from .allocation import closed_form_candidates, select_allocation
from .bounds import zf_terms
from .channel import CsitModel, SystemConfig, sample_realization, substream
from .harness import SweepSpec, render_csv, run_sweep
from .precoders import zf_precoders
from .specfun import EULER_GAMMA, digamma, exp_scaled_em_sum, lambert_w0


def _checks():
    yield "digamma recurrence", all(
        abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-10
        for x in np.linspace(0.1, 50.0, 64)
    )
    yield "digamma at 1 is -gamma", abs(digamma(1.0) + EULER_GAMMA) < 1e-12

    yield "scaled E_m sum under harmonic cap", all(
        exp_scaled_em_sum(m, x) <= sum(1.0 / (j + x - 1.0) for j in range(1, m + 1)) + 1e-12
        for m in (1, 3, 10) for x in (0.05, 1.0, 20.0)
    )

    yield "lambert residual", all(
        abs(lambert_w0(x) * math.exp(lambert_w0(x)) - x) <= 1e-9 * max(1.0, abs(x))
        for x in (-1 / math.e + 1e-6, 0.0, 0.5, math.e, 100.0, 1e6)
    )

    cfg = SystemConfig(n_tx=4, n_users=8, csit=CsitModel("fixed_eps", eps=0.7), seed=7)
    real = sample_realization(cfg, 100.0, substream(cfg.seed, 0))
    compose = np.sqrt(real.eps_sq) * real.h_hat + np.sqrt(1 - real.eps_sq) * real.e
    yield "channel composition identity", bool(np.allclose(compose, real.h, atol=1e-14))

    p = zf_precoders(real.h_hat[:4])
    resid = np.abs(np.conj(real.h_hat[:4]) @ p.T)
    off = resid - np.diag(np.diag(resid))
    yield "ZF orthogonality residual", float(np.max(np.abs(off))) < 1e-10

    terms = zf_terms(4, 8, 100.0, np.ones(8), eps_sq=1.0)
    yield "perfect-CSIT ZF shape/scale", terms.d == 1.0 and terms.theta == 1.0

    v = np.full(8, 0.5)
    perfect = closed_form_candidates(cfg, 100.0, v, 1.0)
    imperfect = closed_form_candidates(cfg, 100.0, v, 1.0 - 1e-12)
    sel_p = select_allocation(perfect)
    sel_i = select_allocation(imperfect)
    yield "near-perfect selection continuity", abs(sel_p.t - sel_i.t) < 1e-3

    sweep = SweepSpec(snr_min_db=10, snr_max_db=10, snr_step_db=5,
                      schemes=("rsma_proposed", "sdma_mrt"), realizations=3)
    a = render_csv(run_sweep(cfg, sweep))
    b = render_csv(run_sweep(cfg, sweep))
    yield "sweep determinism", a == b


def run() -> int:
    failures = 0
    for name, ok in _checks():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures += 1
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    print("all checks passed")
    return 0
