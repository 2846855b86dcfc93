"""Scalar special functions backing the ergodic-rate bounds.

Everything here is pure scalar math with no external dependencies, tuned
for the parameter ranges the allocation formulas actually visit: digamma
on (0, inf), generalized exponential integrals E_m with m up to a few
thousand, the principal Lambert-W branch, and Gamma moment matching for
sums of independent Gamma variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Euler-Mascheroni constant, 20-digit literal
EULER_GAMMA = 0.57721566490153286061

# psi(x) asymptotic tail coefficients: -B_2n/(2n) for the x^{-2n} terms
_PSI_ASYMP = (
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32760.0,
    -1.0 / 12.0,
)


@dataclass(frozen=True)
class GammaApprox:
    """Shape/scale of a single Gamma matched to a Gamma mixture."""

    shape: float
    scale: float

    def __post_init__(self):
        if not (self.shape > 0.0 and self.scale > 0.0):
            raise ValueError("GammaApprox requires positive shape and scale")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale * self.scale


def digamma(x: float) -> float:
    """psi(x) for x > 0 via upward recurrence then the asymptotic series."""
    if not x > 0.0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    # psi(x) = psi(x+1) - 1/x; shift until the asymptotic series is accurate
    while x < 6.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    p = inv2
    for c in _PSI_ASYMP:
        tail += c * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x + tail


def _e1_series(x: float) -> float:
    """E_1(x) for 0 < x < 1 by the convergent power series."""
    total = -EULER_GAMMA - math.log(x)
    term = 1.0
    for k in range(1, 60):
        term *= -x / k
        contrib = -term / k
        total += contrib
        if abs(contrib) < 1e-18 * max(abs(total), 1e-30):
            break
    return total


def _scaled_em_cf(m: int, x: float) -> float:
    """e^x * E_m(x) for x >= 1 via the continued fraction (modified Lentz)."""
    tiny = 1e-300
    b = x + m
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 400):
        a = -i * (m - 1 + i)
        b += 2.0
        d = a * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + a / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h


def _scaled_em(m: int, x: float) -> float:
    """e^x * E_m(x), numerically stable for any x > 0."""
    if x >= 1.0:
        return _scaled_em_cf(m, x)
    # x < 1: chain up from E_1; the recurrence loses at most a factor x/m < 1
    g = math.exp(x) * _e1_series(x)
    for j in range(1, m):
        g = (1.0 - x * g) / j
    return g


def gen_exp_integral(m: int, x: float, allow_zero: bool = False) -> float:
    """Generalized exponential integral E_m(x) = int_1^inf e^{-tx} t^{-m} dt.

    Parameters
    ----------
    m : int
        Order, m >= 1.
    x : float
        Argument, x > 0 (x == 0 only with allow_zero, giving 1/(m-1)).
    allow_zero : bool
        Opt in to the analytic limit E_m(0) = 1/(m-1) for m >= 2.
    """
    if m < 1:
        raise ValueError(f"gen_exp_integral requires m >= 1, got {m}")
    if x == 0.0 and allow_zero:
        if m < 2:
            raise ValueError("E_1(0) diverges")
        return 1.0 / (m - 1)
    if not x > 0.0:
        raise ValueError(f"gen_exp_integral requires x > 0, got {x}")
    if x > 700.0:
        # e^{-x} underflows; the scaled value is the stable representation
        return math.exp(-x) * _scaled_em(m, x) if x < 745.0 else 0.0
    if x >= 1.0:
        return math.exp(-x) * _scaled_em_cf(m, x)
    e1 = _e1_series(x)
    if m == 1:
        return e1
    emx = math.exp(-x)
    e = e1
    for j in range(1, m):
        e = (emx - x * e) / j
    return e


def exp_scaled_em_sum(m_max: int, x: float) -> float:
    """e^x * sum_{m=1..m_max} E_m(x), evaluated without ever forming e^x.

    Each scaled term obeys e^x E_m(x) <= 1/(m + x - 1); the recurrence
    g_{m+1} = (1 - x g_m)/m amplifies error by x/m, so terms with m <= x
    are seeded by the continued fraction and the recurrence runs only on
    its stable side (m > x downward-safe region is never needed upward).
    """
    if m_max < 1:
        raise ValueError(f"exp_scaled_em_sum requires m_max >= 1, got {m_max}")
    if not x > 0.0:
        raise ValueError(f"exp_scaled_em_sum requires x > 0, got {x}")
    total = 0.0
    g = None
    for m in range(1, m_max + 1):
        if g is not None and (m - 1) >= x:
            g = (1.0 - x * g) / (m - 1)
        elif x >= 1.0:
            g = _scaled_em_cf(m, x)
        elif m == 1:
            g = math.exp(x) * _e1_series(x)
        else:
            g = (1.0 - x * g) / (m - 1)
        total += g
    return total


def lambert_w0(x: float) -> float:
    """Principal branch of Lambert W: the w >= -1 with w e^w = x.

    Halley refinement from a piecewise seed; the crude seed
    log x - log log x is used where it is valid (x >= e).
    """
    min_x = -1.0 / math.e
    if x < min_x:
        raise ValueError(f"lambert_w0 requires x >= -1/e, got {x}")
    if x == 0.0:
        return 0.0
    if x <= min_x + 1e-300:
        return -1.0
    if x >= math.e:
        w = math.log(x) - math.log(math.log(x))
    elif x > 0.0:
        w = x / (1.0 + x)
    else:
        # branch-point expansion keeps the seed on w >= -1
        w = -1.0 + math.sqrt(2.0 * (math.e * x + 1.0))
    tol = 1e-13 * max(1.0, abs(x))
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol:
            break
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        w -= f / denom
    return w


def lambert_w0_paper_approx(x: float) -> float:
    """Crude principal-branch approximation log(x) - log(log(x)), x >= e.

    This exact algebraic form feeds the closed-form allocations; the
    refined root from lambert_w0 exists for validation only.
    """
    if x < math.e:
        raise ValueError(f"lambert_w0_paper_approx requires x >= e, got {x}")
    return math.log(x) - math.log(math.log(x))


def gamma_moment_match(components) -> GammaApprox:
    """Match a sum of independent Gamma(D_i, theta_i) variables.

    Returns the Gamma(D_hat, theta_hat) with the same mean and variance:
    D_hat = (sum D_i theta_i)^2 / sum D_i theta_i^2 and
    theta_hat = sum D_i theta_i^2 / sum D_i theta_i.
    """
    comps = list(components)
    if not comps:
        raise ValueError("gamma_moment_match requires at least one component")
    s1 = 0.0
    s2 = 0.0
    for d, theta in comps:
        if not (d > 0.0 and theta > 0.0):
            raise ValueError(f"non-positive Gamma component ({d}, {theta})")
        s1 += d * theta
        s2 += d * theta * theta
    return GammaApprox(shape=s1 * s1 / s2, scale=s2 / s1)
