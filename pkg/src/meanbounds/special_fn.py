"""Gamma family, the complete elliptic integral K, Jacobi theta_3 and bounds for them."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from . import _kernels
from .errors import DomainError, NoConvergence, NonFiniteError
from .means import Power, iterate_mean

HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
STIRLING_SHIFT = 20.0
# B_{2k} / (2k (2k - 1)) for k = 1..8
_STIRLING = (1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0,
             -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0)
SQRT2 = math.sqrt(2.0)
THETA_PREC_ENV = "MEANBOUNDS_THETA_PREC"
DEFAULT_THETA_PREC = 4000


# -- gamma -------------------------------------------------------------------

def _stirling(x: float) -> float:
    r = 1.0 / x
    r2 = r * r
    acc = 0.0
    for c in reversed(_STIRLING):
        acc = acc * r2 + c
    return (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + acc * r


def log_gamma(a: float) -> float:
    """ln Gamma(a) for a > 0: Stirling series after shifting a up to >= 20."""
    if not a > 0 or math.isinf(a):
        raise DomainError(f"log_gamma needs finite a > 0, got {a}")
    if a >= STIRLING_SHIFT:
        return _stirling(a)
    prod = 1.0
    x = a
    while x < STIRLING_SHIFT:
        prod *= x
        x += 1.0
    return _stirling(x) - math.log(prod)


def gamma(a: float) -> float:
    """Gamma(a) for a > 0; exact for small positive integers."""
    if not a > 0:
        raise DomainError(f"gamma needs a > 0, got {a}")
    if a == int(a) and a <= 23:
        return float(math.factorial(int(a) - 1))
    lg = log_gamma(a)
    if lg > 709.7:
        raise NonFiniteError(f"Gamma({a}) overflows")
    return math.exp(lg)


def _series_p(a: float, x: float) -> float:
    # regularized P(a, x) by the power series, for x < a + 1
    if x == 0:
        return 0.0
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(10_000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            return total * math.exp(a * math.log(x) - x - log_gamma(a))
    raise NoConvergence(f"incomplete gamma series did not converge for a={a}, x={x}")


def _cf_q(a: float, x: float) -> float:
    # regularized Q(a, x) by the Lentz continued fraction, for x >= a + 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return math.exp(a * math.log(x) - x - log_gamma(a)) * h
    raise NoConvergence(f"incomplete gamma continued fraction failed for a={a}, x={x}")


def regularized_gamma(a: float, x: float) -> tuple:
    """(P(a, x), Q(a, x)) with P + Q = 1."""
    if not a > 0 or not x >= 0:
        raise DomainError(f"need a > 0 and x >= 0, got a={a}, x={x}")
    if math.isinf(x):
        return 1.0, 0.0
    if x < a + 1.0:
        p = _series_p(a, x)
        return p, 1.0 - p
    q = _cf_q(a, x)
    return 1.0 - q, q


def incomplete_gamma(a: float, x: float) -> dict:
    """Lower and upper incomplete gamma functions gamma(a, x), Gamma(a, x)."""
    p, q = regularized_gamma(a, x)
    g = gamma(a)
    return {"lower": p * g, "upper": q * g}


def _tail_difference_log(a: float) -> float:
    # ln of int_1^inf t^{a-1} e^-t (t^2 - 1) dt = Gamma(a+2,1) - Gamma(a,1)
    q2 = regularized_gamma(a + 2.0, 1.0)[1]
    q0 = regularized_gamma(a, 1.0)[1]
    return log_gamma(a + 2.0) + math.log(q2 - q0 / (a * (a + 1.0)))


def _head_difference(a: float) -> float:
    # int_0^1 t^{a-1} e^-t (1 - t^2) dt = sum (-1)^n / n! * 2 / ((a+n)(a+n+2))
    total = 0.0
    comp = 0.0
    fact = 1.0
    for n in range(200):
        if n:
            fact *= n
        term = (-1.0) ** n / fact * 2.0 / ((a + n) * (a + n + 2.0))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) < 1e-18 * abs(total):
            break
    return total


@dataclass(frozen=True)
class GammaChain:
    a: float
    lower: float
    middle: float
    upper: float
    g_ratio: float
    g_gap: float

    @property
    def l_ratio(self) -> float:
        return self.a / (self.a + 1.0)


def gamma_turan_chain(a: float) -> GammaChain:
    """Gamma(a+1)^2 <= (gamma(a,1) + Gamma(a+2,1))(gamma(a+2,1) + Gamma(a,1)) <= Gamma(a+2) Gamma(a).

    g_gap = 1 - middle/upper is obtained as a product of two region
    integrals divided by Gamma(a+2) Gamma(a), evaluated in the log domain,
    so it stays accurate when it is far below machine epsilon.
    """
    if not a > 0:
        raise DomainError(f"need a > 0, got {a}")
    log_gap = _tail_difference_log(a) + math.log(_head_difference(a)) - log_gamma(a + 2.0) - log_gamma(a)
    g_gap = math.exp(log_gap)
    try:
        ga, ga1, ga2 = gamma(a), gamma(a + 1.0), gamma(a + 2.0)
        p0, q0 = regularized_gamma(a, 1.0)
        p2, q2 = regularized_gamma(a + 2.0, 1.0)
        middle = (p0 * ga + q2 * ga2) * (p2 * ga2 + q0 * ga)
        lower = ga1 * ga1
        upper = ga2 * ga
    except NonFiniteError:
        lower = middle = upper = math.inf
    return GammaChain(float(a), lower, middle, upper, 1.0 - g_gap, g_gap)


# -- elliptic K ----------------------------------------------------------------

def elliptic_k(x: float) -> float:
    """K(x) = int_0^1 dt / sqrt((1 - t^2)(1 - x^2 t^2)) for the modulus 0 <= x < 1."""
    if not 0 <= x < 1:
        raise DomainError(f"elliptic_k needs 0 <= x < 1, got {x}")
    kp = math.sqrt((1.0 - x) * (1.0 + x))
    if kp == 1.0:
        return 0.5 * math.pi
    return 0.5 * math.pi / iterate_mean(Power(1.0), Power(0.0), 1.0, kp)["value"]


def elliptic_k_param(m: float) -> float:
    """K in the parameter convention: K(m) = int dt / sqrt((1 - t^2)(1 - m t^2))."""
    if not 0 <= m < 1:
        raise DomainError(f"elliptic_k_param needs 0 <= m < 1, got {m}")
    kp = math.sqrt(1.0 - m)
    if kp == 1.0:
        return 0.5 * math.pi
    return 0.5 * math.pi / iterate_mean(Power(1.0), Power(0.0), 1.0, kp)["value"]


def kernel_j(alpha: float, beta: float, x: float) -> float:
    """int_0^1 dt / ((alpha + beta t) sqrt((1 - t)(1 - x t))) for alpha, alpha + beta > 0, 0 < x < 1."""
    m = alpha + beta
    d = alpha * x + beta
    md = m * d
    if md <= 0:
        raise DomainError("closed form needs (alpha + beta)(alpha x + beta) > 0")
    r = math.sqrt(md)
    return math.log((m + d + 2.0 * r) / (alpha * (1.0 - x))) / r


_C1 = -3.0 + 2.0 * SQRT2
_C2 = -3.0 - 2.0 * SQRT2
_A1 = (SQRT2 - 1.0) / (2.0 * SQRT2)
_A2 = (SQRT2 + 1.0) / (2.0 * SQRT2)


@dataclass(frozen=True)
class EllipticBounds:
    x: float
    level: int
    lower: float
    upper: float


def elliptic_levels(x: float) -> dict:
    """L_0..L_2 and G_0..G_2 for K(x) from two steps of the M_2 / M_-2 iteration.

    The split is K = int f g with f^2 = 1/((1+t) sqrt(Q)), g^2 = 1/((1+xt) sqrt(Q)),
    Q = (1-t)(1-xt), so f <= g, U_0 = g and V_0 = f. Each bound is a
    combination of kernel_j values.
    """
    if not 0 < x < 1:
        raise DomainError(f"elliptic bounds need 0 < x < 1, got {x}")
    l0 = kernel_j(1.0, 1.0, x)
    g0 = kernel_j(1.0, x, x)
    l1 = 2.0 * kernel_j(2.0, 1.0 + x, x)
    g1 = 0.5 * (l0 + g0)
    l2 = 4.0 * (_A1 * kernel_j(1.0 - _C1, 1.0 - _C1 * x, x)
                + _A2 * kernel_j(1.0 - _C2, 1.0 - _C2 * x, x))
    g2 = 0.5 * (g1 + l1)
    return {"L0": l0, "L1": l1, "L2": l2, "G0": g0, "G1": g1, "G2": g2}


def elliptic_bounds(x: float, level: int = 2) -> EllipticBounds:
    if level not in (0, 1, 2):
        raise DomainError(f"level must be 0, 1 or 2, got {level}")
    lv = elliptic_levels(x)
    return EllipticBounds(float(x), level, lv[f"L{level}"], lv[f"G{level}"])


def elliptic_split(x: float):
    """Vectorized f~, g~ on u in [0, 1] after t = 1 - u^2, with int f~ g~ du = K(x).

    Both factors are scaled by sqrt(2u), which removes the endpoint
    singularity; power means are homogeneous so the iteration commutes
    with the scaling.
    """
    import numpy as np

    def f(u):
        u = np.asarray(u, dtype=float)
        t = 1.0 - u * u
        return np.sqrt(2.0 / ((1.0 + t) * np.sqrt(1.0 - x * t)))

    def g(u):
        u = np.asarray(u, dtype=float)
        t = 1.0 - u * u
        return np.sqrt(2.0 / ((1.0 + x * t) * np.sqrt(1.0 - x * t)))

    return f, g


def elliptic_elementary_lower(k: float) -> float:
    """Lower bound for K(k) from the AM-GM inequality under the integral."""
    if not 0 < k < 1:
        raise DomainError(f"need 0 < k < 1, got {k}")
    s = math.sqrt((1.0 + k * k) / 2.0)
    return math.sqrt(1.0 / (2.0 * (1.0 + k * k))) * math.log((1.0 + s) / (1.0 - s))


# -- theta ---------------------------------------------------------------------

def theta3(z: float, q: float, tail_tol: float = 1e-17) -> float:
    """1 + 2 sum_k q^{k^2} cos(2 k z), summed until 2 q^{k^2} < tail_tol."""
    if not 0 <= q < 1:
        raise DomainError(f"need 0 <= q < 1, got {q}")
    if not tail_tol > 0:
        raise DomainError("tail_tol must be positive")
    return _kernels.theta3_sum(float(z), float(q), float(tail_tol))


def theta_min_bound(q: float) -> dict:
    """exp(-(q^2 + 2q)/(1 - q^2)) bounding the minimum of theta_3 over z."""
    if not 0 <= q < 1:
        raise DomainError(f"need 0 <= q < 1, got {q}")
    log_bound = -(q * q + 2.0 * q) / ((1.0 - q) * (1.0 + q))
    return {"bound": math.exp(log_bound), "log_bound": log_bound,
            "log10_bound": log_bound / math.log(10.0)}


def theta_precision_bits() -> int:
    return int(os.environ.get(THETA_PREC_ENV, DEFAULT_THETA_PREC))


def _mp_context(prec_bits):
    try:
        import mpmath
    except ImportError as exc:  # pragma: no cover - depends on the install
        raise RuntimeError("high-precision theta needs the 'highprec' extra (mpmath)") from exc
    ctx = mpmath.mp.clone()
    ctx.prec = prec_bits or theta_precision_bits()
    return ctx


def theta3_highprec(z: float, q: float, prec_bits: int | None = None):
    """theta_3(z, q) in extended precision with mpmath; returns an mpmath float.

    The working precision defaults to the environment variable
    MEANBOUNDS_THETA_PREC (bits).
    """
    if not 0 <= q < 1:
        raise DomainError(f"need 0 <= q < 1, got {q}")
    ctx = _mp_context(prec_bits)
    qq = ctx.mpf(q)
    zz = ctx.mpf(z)
    eps = ctx.mpf(2) ** (-ctx.prec)
    total = ctx.mpf(1)
    k = 1
    while True:
        a = 2 * qq ** (k * k)
        if a < eps:
            return total
        total += a * ctx.cos(2 * k * zz)
        k += 1


def theta3_half_pi_highprec(q: float, prec_bits: int | None = None):
    """theta_3(pi/2, q) = 1 + 2 sum (-1)^k q^{k^2} in extended precision.

    Near q = 1 the alternating sum loses about log2(1/value) bits to
    cancellation; the default precision is sized for q = 0.999.
    """
    if not 0 <= q < 1:
        raise DomainError(f"need 0 <= q < 1, got {q}")
    ctx = _mp_context(prec_bits)
    qq = ctx.mpf(q)
    eps = ctx.mpf(2) ** (-ctx.prec)
    total = ctx.mpf(1)
    k = 1
    while True:
        a = 2 * qq ** (k * k)
        if a < eps:
            return total
        total += -a if k % 2 else a
        k += 1


def log_theta3_half_pi(q: float) -> float:
    """ln theta_3(pi/2, q) via the modular transformation, valid for 0 < q < 1.

    With q = exp(-pi s), theta_3(pi/2, q) = s^{-1/2} theta_2(0, exp(-pi/s)),
    and theta_2(0, p) = 2 p^{1/4} (1 + p^2 + p^6 + ...), which has no
    cancellation however close q is to 1.
    """
    if not 0 < q < 1:
        raise DomainError(f"need 0 < q < 1, got {q}")
    s = -math.log(q) / math.pi
    lp = -math.pi / s
    tail = 0.0
    k = 1
    while True:
        e = lp * k * (k + 1)
        if e < -745:
            break
        tail += math.exp(e)
        k += 1
    return -0.5 * math.log(s) + math.log(2.0) + 0.25 * lp + math.log1p(tail)
