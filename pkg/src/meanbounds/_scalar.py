"""Scalar numerics for power and Radó means on strictly positive inputs.

Both the compiled kernels and the Python fallback implement exactly these
algorithms; this module is the reference.
"""

import math

import numpy as np

LN2 = math.log(2.0)

# Gauss-Legendre rule mapped to [0, 1], used to average phi' over short spans.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)
GL_NODES = tuple(float(v) for v in 0.5 * (_GL_X + 1.0))
GL_WEIGHTS = tuple(float(v) for v in 0.5 * _GL_W)

# band where ((x^a + y^a)/2)^(1/a) is evaluated literally
DIRECT_ALPHA_MIN = 0.25
DIRECT_ALPHA_MAX = 50.0
DIRECT_EXP_LIMIT = 600.0


def logcosh(z):
    z = abs(z)
    if z < 20.0:
        s = math.sinh(0.5 * z)
        return math.log1p(2.0 * s * s)
    return z - LN2 + math.log1p(math.exp(-2.0 * z))


def power_mean_pos(alpha, x, y):
    """M_alpha(x, y) for x, y > 0 and finite nonzero alpha."""
    if x == y:
        return x
    lx = math.log(x)
    ly = math.log(y)
    if (DIRECT_ALPHA_MIN <= abs(alpha) <= DIRECT_ALPHA_MAX
            and abs(alpha * lx) < DIRECT_EXP_LIMIT
            and abs(alpha * ly) < DIRECT_EXP_LIMIT):
        if alpha == 1.0:
            return 0.5 * x + 0.5 * y
        if alpha == -1.0:
            return 2.0 * x * y / (x + y) if x + y < 1e300 else 2.0 / (1.0 / x + 1.0 / y)
        return ((x ** alpha + y ** alpha) * 0.5) ** (1.0 / alpha)
    mid = 0.5 * (lx + ly)
    half = 0.5 * (lx - ly)
    return math.exp(mid + logcosh(alpha * half) / alpha)


def phi(z):
    """log((e^z - 1) / z), continuous at 0."""
    if z == 0.0:
        return 0.0
    if z > 30.0:
        return z - math.log(z) + math.log1p(-math.exp(-z))
    if z < -30.0:
        return math.log1p(-math.exp(z)) - math.log(-z)
    return math.log(math.expm1(z) / z)


def dphi(z):
    """Derivative of phi: 1/(1 - e^-z) - 1/z."""
    if abs(z) < 0.1:
        z2 = z * z
        return 0.5 + z * (1.0 / 12.0 + z2 * (-1.0 / 720.0 + z2 * (1.0 / 30240.0 - z2 / 1209600.0)))
    if z > 700.0:
        return 1.0 - 1.0 / z
    if z < -700.0:
        return -1.0 / z
    return 1.0 / (-math.expm1(-z)) - 1.0 / z


def rado_log_ratio(beta, d):
    """log R_beta(e^d, 1) for d > 0 and finite beta."""
    if beta == -1.0:
        return phi(d)
    if beta == 0.0:
        return d * dphi(d)
    bd = abs(beta) * d
    if d < 1e-7 and bd < 1e-6:
        return 0.5 * d + (beta + 2.0) * d * d / 24.0
    if bd <= 2.0:
        acc = 0.0
        for s, w in zip(GL_NODES, GL_WEIGHTS):
            acc += w * dphi(d * (1.0 + beta * s))
        return d * acc
    return (phi((beta + 1.0) * d) - phi(d)) / beta


def rado_mean_pos(beta, x, y):
    """R_beta(x, y) for x, y > 0 and finite beta."""
    if x == y:
        return x
    if x < y:
        x, y = y, x
    d = math.log(x) - math.log(y)
    if beta == 1.0:
        return 0.5 * x + 0.5 * y
    return math.exp(math.log(y) + rado_log_ratio(beta, d))


def log_sum_exp2(a, b):
    hi = a if a > b else b
    return hi + math.log1p(math.exp(-abs(a - b)))


def gini_mean_pos(u, v, x, y):
    """Gini mean Gi_{u,v}(x, y) for x, y > 0."""
    if x == y:
        return x
    lx = math.log(x)
    ly = math.log(y)
    if u == v:
        if u == 0.0:
            return math.sqrt(x) * math.sqrt(y)
        # weights x^u/(x^u+y^u) via the logistic function
        wx = 1.0 / (1.0 + math.exp(max(min(u * (ly - lx), 700.0), -700.0)))
        return math.exp(wx * lx + (1.0 - wx) * ly)
    lim = DIRECT_EXP_LIMIT
    if max(abs(u * lx), abs(u * ly), abs(v * lx), abs(v * ly)) < lim and abs(u - v) >= 0.25:
        return ((x ** u + y ** u) / (x ** v + y ** v)) ** (1.0 / (u - v))
    return math.exp((log_sum_exp2(u * lx, u * ly) - log_sum_exp2(v * lx, v * ly)) / (u - v))
