"""Closed-form power/rate allocation candidates and the final selection.

Each candidate fixes the private power fraction t (and, for the two-group
ZF design, the common-rate share beta) from scenario statistics alone, a
predicted max-min rate is attached from the matching bound expressions,
and the best candidate dictates the precoding scheme. Every formula has a
t = 1 fallback, so a usable allocation always exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .bounds import (mrt_bound_objective, mrt_terms, zf_bound_objective,
                     zf_terms)
from .channel import SystemConfig, resolve_mrt_case
from .specfun import EULER_GAMMA, digamma, lambert_w0_paper_approx

_LOG2 = math.log(2.0)
_E = math.e


@dataclass(frozen=True)
class AllocationCandidate:
    """One closed-form (scheme, t, beta) with its predicted max-min rate.

    predicted_rate is the candidate's own regime-form expression;
    objective_rate re-scores the same (t, beta) under the exact-eta bound
    objective, the one metric comparable across candidates.
    """

    index: int                      # candidate number within the selection set
    scheme: str                     # "ZF" or "MRT"
    t: float
    beta: Optional[float]           # None for MRT candidates
    predicted_rate: float
    objective_rate: float = float("nan")
    feasible: bool = True
    reason: str = ""                # why the t = 1 fallback fired, if it did


def feasible_quadratic_root(a: float, b: float, c: float,
                            which: str = "both") -> Tuple[float, ...]:
    """Nonnegative real roots of a t^2 + b t + c = 0.

    Degenerate a = 0 is solved linearly; a negative discriminant or an
    all-negative root set comes back empty (infeasible). Callers apply
    their own min{., 1} clamp.
    """
    if a == 0.0 and b == 0.0 and c == 0.0:
        raise ValueError("degenerate all-zero quadratic")
    if a == 0.0:
        if b == 0.0:
            return ()
        roots = (-c / b,)
    else:
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            return ()
        sq = math.sqrt(disc)
        plus = (-b + sq) / (2.0 * a)
        minus = (-b - sq) / (2.0 * a)
        if which == "plus":
            roots = (plus,)
        elif which == "minus":
            roots = (minus,)
        else:
            roots = (plus, minus)
    return tuple(r for r in roots if r >= 0.0)


def _log2_1p(x: float) -> float:
    return math.log1p(x) / _LOG2


def _common_high_pt(rho: float, t: float) -> float:
    """log2(1 - rho + rho/t) for t in (0, 1]."""
    return _log2_1p(rho / t - rho)


def _zf_small_pt(n: int, m_round: int, power: float, inv_v_sum: float, t: float) -> float:
    num = n * math.exp(-EULER_GAMMA) * power * (1.0 - t)
    den = power * m_round * t + n * inv_v_sum
    return _log2_1p(num / den)


def _clip01(t: float) -> float:
    return min(max(t, 0.0), 1.0)


# ---------------------------------------------------------------------------
# Perfect CSIT
# ---------------------------------------------------------------------------

def perfect_zf_candidates(n_tx: int, n_users: int, power: float,
                          v: np.ndarray) -> List[AllocationCandidate]:
    """Three ZF-design candidates for perfect CSIT, all with beta = 0."""
    n, k = n_tx, n_users
    if k <= n:
        raise ValueError("two-group design needs an overloaded system")
    v = np.asarray(v, float)
    terms = zf_terms(n, k, power, v, eps_sq=1.0)
    rho = terms.rho
    inv_v_sum = terms.inv_v_sum
    v_worst = float(np.min(v[:n]))          # worst gain within group 1
    sigma = v_worst * power / n * math.exp(-EULER_GAMMA)

    def rate(t: float) -> float:
        return min(_common_high_pt(rho, t) / (k - n), _log2_1p(sigma * t))

    out = []

    # balanced-exponent solution for the strong private-rate regime
    expo1 = (math.log(rho) - (k - n) * math.log(sigma)) / (1.0 + k - n)
    t1 = math.exp(max(min(expo1, 0.0), -700.0))   # min{., 1} clamp in log domain
    out.append(AllocationCandidate(1, "ZF", t1, 0.0, rate(t1)))

    # principal-branch solution for the weak private-rate regime
    delta = _LOG2 * (k - n) * sigma
    if delta * rho >= _E:
        t2 = _clip01(lambert_w0_paper_approx(delta * rho) / delta)
        out.append(AllocationCandidate(2, "ZF", t2, 0.0, rate(t2)))
    else:
        out.append(AllocationCandidate(2, "ZF", 1.0, 0.0, rate(1.0),
                                       reason="delta*rho below e"))

    # quadratic solution for the moderate/low power regime
    a3 = power * (k - n + 1.0) * (k - n) * sigma
    b3 = (k - n) * sigma * inv_v_sum + math.exp(-EULER_GAMMA) * power
    c3 = -math.exp(-EULER_GAMMA) * power
    roots = feasible_quadratic_root(a3, b3, c3, which="plus")
    t3 = _clip01(roots[0]) if roots else 1.0
    r3 = min(_zf_small_pt(n, n * (k - n + 1), power, inv_v_sum, t3) / (k - n),
             _log2_1p(sigma * t3))
    out.append(AllocationCandidate(3, "ZF", t3, 0.0, r3,
                                   reason="" if roots else "no nonnegative root"))
    return out


def perfect_mrt_candidates(n_tx: int, n_users: int, power: float, v: np.ndarray,
                           case: str, first_index: int = 4) -> List[AllocationCandidate]:
    """Two MRT candidates (the quadratic's root pair) for perfect CSIT."""
    n, k = n_tx, n_users
    v = np.asarray(v, float)
    terms = mrt_terms(n, k, power, v, eps_sq=1.0)
    inv_v_sum = terms.inv_v_sum
    v_worst = float(np.min(v))
    alpha = v_worst * power / k * math.exp(digamma(n + k - 1.0))
    lam = v_worst * power * (k - 1.0) / k

    if case == "case1":
        def rate(t: float) -> float:
            return (_common_high_pt(terms.rho, t) / k
                    + _log2_1p(alpha * t) - _log2_1p(lam * t))

        a1 = -alpha * lam
        b1 = k * (alpha - lam) - (alpha + lam)
        disc = b1 * b1 + 4.0 * a1
        if disc >= 0.0 and b1 >= 0.0:
            roots = feasible_quadratic_root(a1, b1, -1.0, which="both")
        else:
            roots = ()
        reason = "" if roots else "no nonnegative real root"
    elif case == "case2":
        def rate(t: float) -> float:
            num = power * math.exp(-EULER_GAMMA) * (1.0 - t)
            den = (n + k - 1.0) * power * t + inv_v_sum
            return _log2_1p(num / den) / k + _log2_1p(alpha * t) - _log2_1p(lam * t)

        omega = power * math.exp(-EULER_GAMMA) * (power * (n + k - 1.0) + inv_v_sum) / k
        gap = alpha - lam
        em = math.exp(-EULER_GAMMA)
        a2 = power ** 2 * gap * (n + k - 1.0) * (n + k - 1.0 - em) - omega * alpha * lam
        b2 = gap * (power * (n + k - 1.0) * (power * em + inv_v_sum)
                    + power * (n + k - 1.0 - em) * inv_v_sum) - omega * (alpha + lam)
        c2 = gap * inv_v_sum * (power * em + inv_v_sum) - omega
        roots = feasible_quadratic_root(a2, b2, c2, which="both")
        reason = "" if roots else "no nonnegative real root"
    else:
        raise ValueError(f"unknown MRT case {case!r}")

    ts = [_clip01(min(r, 1.0)) for r in roots[:2]]
    while len(ts) < 2:
        ts.append(1.0)
    return [
        AllocationCandidate(first_index + j, "MRT", t, None, rate(t),
                            reason="" if j < len(roots) else reason or "root slot empty")
        for j, t in enumerate(ts)
    ]


# ---------------------------------------------------------------------------
# Imperfect CSIT
# ---------------------------------------------------------------------------

def imperfect_zf_candidates(n_tx: int, n_users: int, power: float, v: np.ndarray,
                            eps_sq: float, beta_fraction: float,
                            lambda_gate: float) -> List[AllocationCandidate]:
    """Four ZF-design candidates for imperfect CSIT."""
    n, k = n_tx, n_users
    if k <= n:
        raise ValueError("two-group design needs an overloaded system")
    v = np.asarray(v, float)
    terms = zf_terms(n, k, power, v, eps_sq=eps_sq)
    rho = terms.rho
    inv_v_sum = terms.inv_v_sum
    v_worst = float(np.min(v[:n]))
    sigma = v_worst * power / n * terms.theta * math.exp(digamma(terms.d))
    nu = v_worst * power * (n - 1.0) * (1.0 - eps_sq) / n
    delta = _LOG2 * (k - n) * (sigma - nu)
    eps_f = beta_fraction
    beta_cap = 1.0 / k

    def common_part(t: float) -> float:
        return _common_high_pt(rho, t)

    def rate_two_branch(t: float, beta: float) -> float:
        l = common_part(t)
        private = _log2_1p(sigma * t) - _log2_1p(nu * t)
        return min((1.0 - n * beta) / (k - n) * l, beta * l + private)

    out = []

    # 1: balanced-exponent form; beta snaps to 0 or its cap by the sign of
    # the high-power slope
    beta1 = 0.0 if sigma * rho > 1.0 else eps_f / k
    expo = ((1.0 - k * beta1) * math.log(rho) - (k - n) * math.log(sigma)) \
        / (1.0 - k * beta1 + k - n)
    t1 = math.exp(max(min(expo, 0.0), -700.0))    # min{., 1} clamp in log domain
    out.append(AllocationCandidate(1, "ZF", t1, beta1, rate_two_branch(t1, beta1)))

    # 2: principal-branch form at beta = eps_f / K, gated on its own validity
    beta2 = eps_f / k
    scale = 1.0 - eps_f
    reason2 = ""
    t2 = 1.0
    if delta <= 0.0:
        reason2 = "sigma <= nu"
    elif delta * rho / scale < _E:
        reason2 = "delta*rho/(1-eps_f) below e"
    else:
        t2_formula = lambert_w0_paper_approx(delta * rho / scale) * scale / delta
        if power * t2_formula < lambda_gate:
            reason2 = "private power below lambda gate"
        else:
            t2 = _clip01(t2_formula)
    out.append(AllocationCandidate(2, "ZF", t2, beta2, rate_two_branch(t2, beta2),
                                   reason=reason2))

    # 3: strong-error form; valid only where the error beam dominates
    beta3 = 0.0
    t3 = 1.0
    reason3 = ""
    if nu <= 0.0:
        reason3 = "no residual private interference"
    else:
        log_nr = math.log(nu * rho)
        log_sn = math.log(sigma / nu)
        if log_nr == 0.0:
            pre = 0.0 if log_sn > 0.0 else beta_cap
        else:
            pre = beta_cap - (k - n) * log_sn / (k * log_nr)
        beta3 = min(max(pre, 0.0), beta_cap)
        denom = 1.0 - k * beta3
        if denom <= 0.0 and log_sn > 0.0:
            reason3 = "rate share saturated with dominant signal"
        else:
            expo3 = math.inf if denom <= 0.0 else (k - n) / denom
            t3 = math.exp(max(min(math.log(rho) - expo3 * log_sn, 0.0), -700.0)) \
                if math.isfinite(expo3) else (1.0 if log_sn < 0.0 else 0.0)
            if not t3 > 0.0:
                t3 = 1.0
                reason3 = "formula left its validity region"
    out.append(AllocationCandidate(3, "ZF", t3, beta3, rate_two_branch(t3, beta3),
                                   reason=reason3))

    # 4: moderate/low power principal-branch form at beta = 0; the lambda
    # gate is evaluated at the shifted share eps_f / K
    beta4 = 0.0
    t4 = 1.0
    reason4 = ""
    if delta <= 0.0:
        reason4 = "sigma <= nu"
    else:
        x0 = delta * inv_v_sum / (math.exp(-EULER_GAMMA) * power)
        if x0 < _E:
            reason4 = "argument below e"
        else:
            # crude Lambert form on x0*e^delta, kept in log domain since
            # e^delta overflows for large delta
            log_a0 = math.log(x0) + delta
            t4_formula = 1.0 - (log_a0 - math.log(log_a0)) / delta
            xe = x0 / (1.0 - eps_f)
            log_ae = math.log(xe) + delta / (1.0 - eps_f)
            t4_eps = 1.0 - (log_ae - math.log(log_ae)) * (1.0 - eps_f) / delta
            if power * t4_eps < lambda_gate:
                reason4 = "private power below lambda gate"
            else:
                t4 = _clip01(t4_formula)
    r4 = min(_zf_small_pt(n, terms.m_round, power, inv_v_sum, t4) / (k - n),
             _log2_1p(sigma * t4))
    out.append(AllocationCandidate(4, "ZF", t4, beta4, r4, reason=reason4))
    return out


def imperfect_mrt_candidates(n_tx: int, n_users: int, power: float, v: np.ndarray,
                             eps_sq: float, case: str,
                             first_index: int = 5) -> List[AllocationCandidate]:
    """Two MRT candidates for imperfect CSIT (root pair of the chosen case)."""
    n, k = n_tx, n_users
    v = np.asarray(v, float)
    terms = mrt_terms(n, k, power, v, eps_sq=eps_sq)
    inv_v_sum = terms.inv_v_sum
    v_worst = float(np.min(v))
    alpha = v_worst * power / k * terms.theta * math.exp(digamma(terms.d))
    lam = v_worst * power * (k - 1.0) / k
    m = terms.m_round
    theta = terms.theta
    em = math.exp(-EULER_GAMMA)

    if case == "case1":
        def rate(t: float) -> float:
            return (_common_high_pt(terms.rho, t) / k
                    + _log2_1p(alpha * t) - _log2_1p(lam * t))

        a1 = -alpha * lam
        b1 = k * (alpha - lam) - (alpha + lam)
        roots = feasible_quadratic_root(a1, b1, -1.0, which="both") \
            if b1 * b1 + 4.0 * a1 >= 0.0 else ()
    elif case == "case2":
        def rate(t: float) -> float:
            num = power * k * em * (1.0 - t)
            den = power * theta * m * t + k * inv_v_sum
            return _log2_1p(num / den) / k + _log2_1p(alpha * t) - _log2_1p(lam * t)

        omega = power * em * (power * theta * m + k * inv_v_sum)
        gap = alpha - lam
        a2 = gap * ((power * theta * m) ** 2 - power ** 2 * theta * m * k * em) \
            - omega * alpha * lam
        b2 = gap * power * k * (power * theta * m * em + 2.0 * theta * m * inv_v_sum
                                - k * em * inv_v_sum) - omega * (alpha + lam)
        c2 = gap * k ** 2 * inv_v_sum * (power * em + inv_v_sum) - omega
        roots = feasible_quadratic_root(a2, b2, c2, which="both")
    else:
        raise ValueError(f"unknown MRT case {case!r}")

    reason = "" if roots else "no nonnegative real root"
    ts = [_clip01(min(r, 1.0)) for r in roots[:2]]
    while len(ts) < 2:
        ts.append(1.0)
    return [
        AllocationCandidate(first_index + j, "MRT", t, None, rate(t),
                            reason="" if j < len(roots) else reason or "root slot empty")
        for j, t in enumerate(ts)
    ]


# ---------------------------------------------------------------------------
# Assembly and selection
# ---------------------------------------------------------------------------

def score_candidate(cand: AllocationCandidate, n_tx: int, n_users: int,
                    power: float, v: np.ndarray, eps_sq: float) -> AllocationCandidate:
    """Attach the exact-eta bound-objective value at the candidate's point."""
    if cand.scheme == "ZF":
        val = zf_bound_objective(n_tx, n_users, power, v, eps_sq, cand.t, cand.beta)
    else:
        val = mrt_bound_objective(n_tx, n_users, power, v, eps_sq, cand.t)
    return replace(cand, objective_rate=val)


def closed_form_candidates(cfg: SystemConfig, power: float, v: np.ndarray,
                           eps_sq: float) -> List[AllocationCandidate]:
    """Full candidate set for one scenario: ZF family then MRT family."""
    case = resolve_mrt_case(cfg, power, float(np.min(v)))
    if eps_sq == 1.0:
        cands = perfect_zf_candidates(cfg.n_tx, cfg.n_users, power, v)
        cands += perfect_mrt_candidates(cfg.n_tx, cfg.n_users, power, v, case,
                                        first_index=4)
    else:
        cands = imperfect_zf_candidates(cfg.n_tx, cfg.n_users, power, v, eps_sq,
                                        cfg.beta_fraction, cfg.lambda_gate)
        cands += imperfect_mrt_candidates(cfg.n_tx, cfg.n_users, power, v, eps_sq,
                                          case, first_index=5)
    return [score_candidate(c, cfg.n_tx, cfg.n_users, power, v, eps_sq)
            for c in cands]


def select_allocation(candidates: Sequence[AllocationCandidate]) -> AllocationCandidate:
    """Best feasible candidate; ties go to the lowest index.

    Candidates are compared by their bound-objective value when it has
    been attached (the regime-form predicted rates are not comparable
    across candidates: a high-power form evaluated at small t can
    overstate the achievable rate several-fold). Falls back to the
    predicted rate when no candidate carries a score.
    """
    usable = [c for c in candidates if c.feasible]
    if not usable:
        raise ValueError("no feasible allocation candidate")
    scored = all(math.isfinite(c.objective_rate) for c in usable)
    key = (lambda c: c.objective_rate) if scored else (lambda c: c.predicted_rate)
    best = usable[0]
    for cand in usable[1:]:
        if key(cand) > key(best):
            best = cand
    return best
