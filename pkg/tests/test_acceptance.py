"""Acceptance suite: one test per exit criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Tolerances are pinned here and nowhere else.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate, optimize

from rsma_maxmin.allocation import (closed_form_candidates,
                                    imperfect_mrt_candidates,
                                    imperfect_zf_candidates,
                                    perfect_mrt_candidates,
                                    perfect_zf_candidates, select_allocation)
from rsma_maxmin.bounds import (common_lb_mrt, common_lb_zf, mrt_terms,
                                private_lb_mrt, private_lb_zf, zf_terms)
from rsma_maxmin.channel import (CsitModel, SystemConfig,
                                 effective_csit_quality, sample_large_scale,
                                 sample_realization, substream)
from rsma_maxmin.harness import SweepSpec, render_csv, run_sweep
from rsma_maxmin.precoders import rsma_precoder_set
from rsma_maxmin.rates import ergodic_rates_mc, instantaneous_sinrs
from rsma_maxmin.search import (default_grid, exhaustive_search,
                                zf_objective_grid)
from rsma_maxmin.specfun import (EULER_GAMMA, digamma, exp_scaled_em_sum,
                                 gen_exp_integral, lambert_w0)

LOG2 = math.log(2.0)


def report(num, name, ok, detail=""):
    line = f"ACCEPTANCE {num} ({name}): {'PASS' if ok else 'FAIL'}"
    if detail and not ok:
        line += f" -- {detail}"
    print("\n" + line)
    assert ok, line


# ---------------------------------------------------------------------------
# 1. special-function oracle suite
# ---------------------------------------------------------------------------

def test_criterion_1_special_function_oracles():
    start = time.monotonic()
    bad = []

    def digamma_oracle(x):
        f = lambda u: math.exp(-u) / u - math.exp(-x * u) / (-math.expm1(-u))
        head, _ = integrate.quad(f, 1e-300, 50.0, limit=400,
                                 points=[1e-8, 1e-3, 1.0, 10.0])
        tail, _ = integrate.quad(f, 50.0, np.inf, limit=200)
        return head + tail

    for x in (0.05, 0.5, 1.0, 3.3, 6.0, 11.0, 60.0, 900.0):
        if abs(digamma(x) - digamma_oracle(x)) > 1e-8 * max(1.0, abs(digamma_oracle(x))):
            bad.append(f"digamma({x})")

    def em_oracle(m, x):
        f = lambda u: math.exp(-x * u - m * math.log(u))
        val, _ = integrate.quad(f, 1.0, np.inf, limit=200)
        return val

    for m in (1, 2, 5, 20):
        for x in (0.02, 0.7, 1.0, 4.0, 30.0):
            oracle = em_oracle(m, x)
            if abs(gen_exp_integral(m, x) - oracle) > 1e-8 * oracle:
                bad.append(f"E_{m}({x})")
            scaled_oracle = math.exp(x) * oracle if x < 500 else None
            if scaled_oracle is not None:
                got = exp_scaled_em_sum(m, x) - sum(
                    math.exp(x) * em_oracle(j, x) for j in range(1, m))
                if abs(got - scaled_oracle) > 1e-8 * scaled_oracle:
                    bad.append(f"scaled sum term m={m} x={x}")

    for x in np.geomspace(1e-3, 1e6, 25):
        oracle = optimize.bisect(lambda w: w * math.exp(w) - x, -1.0, 700.0,
                                 xtol=1e-13)
        if abs(lambert_w0(x) - oracle) > 1e-8 * max(1.0, oracle):
            bad.append(f"W0({x:.3g})")

    elapsed = time.monotonic() - start
    if elapsed >= 5.0:
        bad.append(f"runtime {elapsed:.1f}s")
    report(1, "special-function oracles", not bad, ", ".join(bad))


# ---------------------------------------------------------------------------
# 2. reduction identities at eps^2 = 1
# ---------------------------------------------------------------------------

def test_criterion_2_reduction_identities():
    rng = np.random.default_rng(2026)
    tol = 1e-9
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(n + 1, n + 17))
        p = float(10 ** rng.uniform(-1, 5))
        v = rng.uniform(0.05, 1.0, k)
        t = float(rng.uniform(0.01, 1.0))

        mt_i = mrt_terms(n, k, p, v, 1.0, t=t)
        zt_i = zf_terms(n, k, p, v, 1.0, t=t)
        worst = max(worst, abs(mt_i.d - (n + k - 1)), abs(mt_i.theta - 1.0),
                    abs(zt_i.d - 1.0), abs(zt_i.theta - 1.0))

        for regime in ("exact_eta", "small_pt", "high_pt"):
            worst = max(worst, abs(
                common_lb_zf(zt_i, n, p, t, regime)
                - common_lb_zf(zf_terms(n, k, p, v, 1.0, t=t), n, p, t, regime)))
        sigma_p = float(np.min(v[:n])) * p / n * math.exp(-EULER_GAMMA)
        worst = max(worst, abs(
            private_lb_zf(zt_i, n, p, t, float(np.min(v[:n])), 1.0)
            - math.log2(1.0 + sigma_p * t)))

        if n >= 2 and k > n:
            perf = perfect_zf_candidates(n, k, p, v)
            imp = imperfect_zf_candidates(n, k, p, v, 1.0, 0.0, 0.0)
            for a, b in ((imp[0], perf[0]), (imp[1], perf[1])):
                worst = max(worst, abs(a.t - b.t),
                            abs(a.predicted_rate - b.predicted_rate),
                            abs(a.beta - b.beta))
        for case in ("case1", "case2"):
            perf = perfect_mrt_candidates(n, k, p, v, case)
            imp = imperfect_mrt_candidates(n, k, p, v, 1.0, case)
            for a, b in zip(imp, perf):
                worst = max(worst, abs(a.t - b.t),
                            abs(a.predicted_rate - b.predicted_rate))
    report(2, "imperfect-to-perfect reduction", worst <= tol,
           f"worst deviation {worst:.3e}")


# ---------------------------------------------------------------------------
# 3. range lemmas and fallback gates
# ---------------------------------------------------------------------------

def test_criterion_3_ranges_and_gates():
    rng = np.random.default_rng(33)
    problems = []
    eps_f, lam_gate = 0.98, 0.3
    for trial in range(10_000):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(n + 1, n + 17))
        p = float(10 ** rng.uniform(-2, 5))
        v = rng.uniform(0.05, 1.0, k)
        eps_sq = float(rng.uniform(0.0, 1.0)) if trial % 2 else 1.0

        if eps_sq == 1.0:
            cands = perfect_zf_candidates(n, k, p, v) if n >= 1 else []
            cands += perfect_mrt_candidates(n, k, p, v,
                                            "case1" if trial % 4 else "case2")
            zt = zf_terms(n, k, p, v, 1.0)
            sigma = float(np.min(v[:n])) * p / n * math.exp(-EULER_GAMMA)
            delta = LOG2 * (k - n) * sigma
            gate = delta * zt.rho >= math.e
            c2 = cands[1]
            if gate:
                expect = (math.log(delta * zt.rho)
                          - math.log(math.log(delta * zt.rho))) / delta
                if abs(c2.t - min(expect, 1.0)) > 1e-12:
                    problems.append(f"trial {trial}: perfect gate-pass t mismatch")
            elif c2.t != 1.0 or not c2.reason:
                problems.append(f"trial {trial}: perfect gate-fail fallback")
        else:
            cands = imperfect_zf_candidates(n, k, p, v, eps_sq, eps_f, lam_gate)
            cands += imperfect_mrt_candidates(n, k, p, v, eps_sq,
                                              "case1" if trial % 4 else "case2")
            zt = zf_terms(n, k, p, v, eps_sq)
            v_w = float(np.min(v[:n]))
            sigma = v_w * p / n * zt.theta * math.exp(digamma(zt.d))
            nu = v_w * p * (n - 1) * (1 - eps_sq) / n
            delta = LOG2 * (k - n) * (sigma - nu)
            c2 = cands[1]
            w = delta * zt.rho / (1 - eps_f) if delta > 0 else -1.0
            gate2 = delta > 0 and w >= math.e
            if gate2:
                t_formula = (math.log(w) - math.log(math.log(w))) * (1 - eps_f) / delta
                gate2 = p * t_formula >= lam_gate
            if gate2 and abs(c2.t - min(max(t_formula, 0.0), 1.0)) > 1e-12:
                problems.append(f"trial {trial}: imperfect c2 t mismatch")
            if not gate2 and (c2.t != 1.0 or not c2.reason):
                problems.append(f"trial {trial}: imperfect c2 fallback")
            c4 = cands[3]
            gate4 = delta > 0
            if gate4:
                x0 = delta * zt.inv_v_sum / (math.exp(-EULER_GAMMA) * p)
                gate4 = x0 >= math.e
                if gate4:
                    xe = x0 / (1 - eps_f)
                    log_ae = math.log(xe) + delta / (1 - eps_f)
                    t_eps = 1.0 - (log_ae - math.log(log_ae)) * (1 - eps_f) / delta
                    gate4 = p * t_eps >= lam_gate
            if not gate4 and (c4.t != 1.0 or not c4.reason):
                problems.append(f"trial {trial}: imperfect c4 fallback")

        for c in cands:
            if not 0.0 <= c.t <= 1.0:
                problems.append(f"trial {trial}: t out of range ({c.index}, {c.t})")
            if c.beta is not None and not 0.0 <= c.beta <= 1.0 / k + 1e-15:
                problems.append(f"trial {trial}: beta out of range ({c.index}, {c.beta})")
        if len(problems) > 5:
            break
    report(3, "range lemmas and fallback gates", not problems,
           "; ".join(problems[:5]))


# ---------------------------------------------------------------------------
# 4. closed form vs exhaustive search
# ---------------------------------------------------------------------------

def test_criterion_4_closed_form_vs_exhaustive():
    start = time.monotonic()
    n_real = 100
    bound_fails, mc_fails, table = [], [], []
    for label, csit in (("perfect", CsitModel("perfect")),
                        ("eps2=0.09", CsitModel("fixed_eps", eps=0.3)),
                        ("eps2=0.49", CsitModel("fixed_eps", eps=0.7))):
        cfg = SystemConfig(n_tx=4, n_users=8, csit=csit, v_min=0.1, seed=404)
        grid = default_grid(cfg)
        for snr in range(0, 41, 5):
            power = 10.0 ** (snr / 10.0) / 0.1
            eps_sq = effective_csit_quality(cfg, power)
            f_prop = np.empty(n_real)
            f_star = np.empty(n_real)
            mc_prop = np.empty(n_real)
            mc_star = np.empty(n_real)
            for r in range(n_real):
                rng = substream(404, snr, r)
                real = sample_realization(cfg, power, rng)
                best = select_allocation(
                    closed_form_candidates(cfg, power, real.v, eps_sq))
                res = exhaustive_search(cfg, power, real.v, eps_sq, grid)
                f_prop[r] = best.objective_rate
                f_star[r] = res.rate

                for which, (scheme, t, beta) in enumerate(
                        ((best.scheme, best.t, best.beta),
                         (res.scheme, res.t, res.beta))):
                    pre = rsma_precoder_set(real.h_hat, scheme,
                                            common_mode=cfg.common_mode)
                    gamma_c, gamma_p = instantaneous_sinrs(real, pre, t, power)
                    rc = math.log2(1.0 + gamma_c.min())
                    private = np.log2(1.0 + gamma_p)
                    if scheme == "ZF":
                        mm = min(beta * rc + private[:4].min(),
                                 (1 - 4 * beta) / 4 * rc)
                    else:
                        mm = rc / 8 + private.min()
                    (mc_prop if which == 0 else mc_star)[r] = mm
            ratio = f_prop.mean() / f_star.mean()
            gap = mc_star.mean() - mc_prop.mean()
            tol = max(0.3, 0.1 * mc_star.mean())
            table.append(f"{label} snr={snr}: ratio={ratio:.3f} mc_gap={gap:+.3f}")
            if ratio < 0.95:
                bound_fails.append(f"{label}@{snr}dB ratio={ratio:.3f}")
            if gap > tol:
                mc_fails.append(f"{label}@{snr}dB gap={gap:.3f} tol={tol:.3f}")
    elapsed = time.monotonic() - start
    runtime_ok = elapsed < 120.0
    detail = (f"bound-objective <95% at {len(bound_fails)}/27 points: "
              + "; ".join(bound_fails) + f" | MC fails: {mc_fails or 'none'}"
              + f" | runtime {elapsed:.0f}s")
    report(4, "closed form within 95% of exhaustive + MC agreement",
           not bound_fails and not mc_fails and runtime_ok, detail)


# ---------------------------------------------------------------------------
# 5. SDMA saturation vs RSMA growth
# ---------------------------------------------------------------------------

def test_criterion_5_sdma_saturation_rsma_growth():
    cfg = SystemConfig(n_tx=4, n_users=8, seed=505, large_scale=(1.0,) * 8,
                       v_min=1.0)
    sweep = SweepSpec(snr_min_db=0, snr_max_db=40, snr_step_db=10,
                      schemes=("rsma_proposed", "sdma_zf_grouping", "sdma_mrt"),
                      realizations=1000)
    rows = run_sweep(cfg, sweep)
    tab = {(r.scheme, r.snr_db): r.maxmin_rate for r in rows}
    problems = []
    for s in ("sdma_zf_grouping", "sdma_mrt"):
        growth = tab[(s, 40.0)] - tab[(s, 30.0)]
        if growth > 0.15:
            problems.append(f"{s} grew {growth:.3f} > 0.15")
    rsma_growth = tab[("rsma_proposed", 40.0)] - tab[("rsma_proposed", 30.0)]
    if rsma_growth < 0.5:
        problems.append(f"rsma grew only {rsma_growth:.3f} < 0.5")
    for snr in (20.0, 30.0, 40.0):
        for s in ("sdma_zf_grouping", "sdma_mrt"):
            if tab[("rsma_proposed", snr)] < tab[(s, snr)]:
                problems.append(f"rsma below {s} at {snr} dB")
    report(5, "SDMA saturates, RSMA grows", not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# 6. scheduling comparison under imperfect CSIT
# ---------------------------------------------------------------------------

def test_criterion_6_beats_scheduled_sdma():
    cfg = SystemConfig(n_tx=4, n_users=8, seed=606, v_min=0.1,
                       csit=CsitModel("fixed_eps", eps=0.7))
    sweep = SweepSpec(snr_min_db=30, snr_max_db=40, snr_step_db=10,
                      schemes=("rsma_proposed", "sdma_scheduling_zf",
                               "sdma_scheduling_mrt"),
                      realizations=1000)
    rows = run_sweep(cfg, sweep)
    tab = {(r.scheme, r.snr_db): r.maxmin_rate for r in rows}
    problems = []
    for snr in (30.0, 40.0):
        for s in ("sdma_scheduling_zf", "sdma_scheduling_mrt"):
            if tab[("rsma_proposed", snr)] < tab[(s, snr)]:
                problems.append(
                    f"rsma {tab[('rsma_proposed', snr)]:.3f} < {s} "
                    f"{tab[(s, snr)]:.3f} at {snr} dB")
    report(6, "RSMA beats scheduled SDMA at 30/40 dB", not problems,
           "; ".join(problems))


# ---------------------------------------------------------------------------
# 7. two-branch balance at the exhaustive optimum
# ---------------------------------------------------------------------------

def test_criterion_7_branch_balance_at_optimum():
    rng = np.random.default_rng(707)
    problems = []
    for trial in range(50):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(n + 1, n + 9))
        p = float(10 ** rng.uniform(0.5, 3.5))
        eps_sq = float(rng.uniform(0.3, 1.0))
        v = rng.uniform(0.2, 1.0, k)
        t_vals = np.unique(np.concatenate([
            np.geomspace(1e-6, 1e-1, 144), np.linspace(1e-1, 1.0, 145)[1:]]))
        b_vals = np.linspace(0.0, 1.0 / k, 161)
        f = zf_objective_grid(n, k, p, v, eps_sq, t_vals, b_vals)
        i, j = np.unravel_index(int(np.argmax(f)), f.shape)
        terms = zf_terms(n, k, p, v, eps_sq, t=float(t_vals[i]))
        rc = common_lb_zf(terms, n, p, float(t_vals[i]))
        rp = private_lb_zf(terms, n, p, float(t_vals[i]), float(np.min(v[:n])),
                           eps_sq)
        beta = float(b_vals[j])
        b1 = beta * rc + rp
        b2 = (1.0 - n * beta) / (k - n) * rc
        neigh = []
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            if 0 <= i + di < f.shape[0] and 0 <= j + dj < f.shape[1]:
                neigh.append(abs(f[i + di, j + dj] - f[i, j]))
        tol = max(neigh)
        if abs(b1 - b2) > tol + 1e-12:
            problems.append(
                f"trial {trial}: |b1-b2|={abs(b1-b2):.3e} > tol={tol:.3e}")
    report(7, "branch balance at ZF optimum", not problems,
           "; ".join(problems[:5]))


# ---------------------------------------------------------------------------
# 8. bound validity against Monte Carlo
# ---------------------------------------------------------------------------

def test_criterion_8_bounds_respect_monte_carlo():
    n, k = 4, 8
    points = [
        ("ZF", 1.00, 0.5, 10.0, np.ones(k)),
        ("ZF", 0.50, 0.3, 10.0, np.linspace(0.2, 1, k)),
        ("ZF", 0.09, 0.7, 100.0, np.full(k, 0.5)),
        ("ZF", 0.81, 0.1, 100.0, np.ones(k)),
        ("ZF", 1.00, 0.9, 1.0, np.linspace(0.1, 1, k)),
        ("MRT", 1.00, 0.5, 10.0, np.ones(k)),
        ("MRT", 0.49, 0.2, 100.0, np.linspace(0.2, 1, k)),
        ("MRT", 0.09, 0.8, 10.0, np.full(k, 0.7)),
        ("MRT", 1.00, 1.0, 100.0, np.ones(k)),
        ("MRT", 0.81, 0.05, 1000.0, np.linspace(0.1, 1, k)),
    ]
    problems = []
    for i, (scheme, eps_sq, t, p, v) in enumerate(points):
        csit = CsitModel("perfect") if eps_sq == 1.0 else \
            CsitModel("fixed_eps", eps=float(np.sqrt(eps_sq)))
        cfg = SystemConfig(n_tx=n, n_users=k, csit=csit, seed=800 + i,
                           large_scale=tuple(v), common_mode="random")
        rep = ergodic_rates_mc(cfg, scheme, t, 10_000, substream(800, i), power=p)
        if scheme == "ZF":
            terms = zf_terms(n, k, p, v, eps_sq, t=t)
            cb = common_lb_zf(terms, n, p, t, "exact_eta")
            users = range(n)
            private = [private_lb_zf(terms, n, p, t, float(v[u]), eps_sq)
                       for u in users]
        else:
            terms = mrt_terms(n, k, p, v, eps_sq, t=t)
            cb = common_lb_mrt(terms, k, p, t, "exact_eta")
            users = range(k)
            private = [private_lb_mrt(terms, k, p, t, float(v[u])) for u in users]
        if cb > rep.common_rate + 3 * rep.common_std_err:
            problems.append(f"point {i}: common bound {cb:.4f} above MC "
                            f"{rep.common_rate:.4f}")
        for u, lb in zip(users, private):
            if lb > rep.private_rates[u] + 3 * rep.private_std_err[u]:
                problems.append(f"point {i}: private bound user {u}")
    report(8, "bounds stay below Monte Carlo", not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# 9. determinism
# ---------------------------------------------------------------------------

def test_criterion_9_byte_identical_sweeps():
    cfg = SystemConfig(n_tx=2, n_users=4, seed=909, v_min=0.1,
                       csit=CsitModel("fixed_eps", eps=0.6))
    sweep = SweepSpec(snr_min_db=0, snr_max_db=20, snr_step_db=10,
                      schemes=("rsma_proposed", "rsma_exhaustive",
                               "sdma_zf_grouping", "sdma_scheduling_mrt"),
                      realizations=10)
    a = render_csv(run_sweep(cfg, sweep))
    b = render_csv(run_sweep(cfg, sweep))
    report(9, "byte-identical repeat sweep", a == b)
