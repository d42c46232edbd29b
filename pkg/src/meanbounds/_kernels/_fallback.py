"""Pure-Python implementations of the hot kernels.

Signatures and results match the compiled ``_core`` module; parity is
checked in the test suite.
"""

import math

import numpy as np

from .._scalar import logcosh, power_mean_pos, rado_mean_pos


def power_mean_many(alpha, xs, ys):
    xs = np.ascontiguousarray(xs, dtype=float)
    ys = np.ascontiguousarray(ys, dtype=float)
    out = np.empty(xs.shape[0])
    for i in range(xs.shape[0]):
        out[i] = power_mean_pos(alpha, float(xs[i]), float(ys[i]))
    return out


def rado_mean_many(beta, xs, ys):
    xs = np.ascontiguousarray(xs, dtype=float)
    ys = np.ascontiguousarray(ys, dtype=float)
    out = np.empty(xs.shape[0])
    for i in range(xs.shape[0]):
        out[i] = rado_mean_pos(beta, float(xs[i]), float(ys[i]))
    return out


def dft_direct(re, im):
    """b_j = n^{-1/2} sum_k a_k exp(-2 pi i j k / n), by O(n^2) summation."""
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    n = re.shape[0]
    out_re = np.empty(n)
    out_im = np.empty(n)
    scale = 1.0 / math.sqrt(n)
    for j in range(n):
        sr = 0.0
        si = 0.0
        for k in range(n):
            # reduce jk mod n first so the angle stays exact for large n
            ang = -2.0 * math.pi * ((j * k) % n) / n
            c = math.cos(ang)
            s = math.sin(ang)
            sr += re[k] * c - im[k] * s
            si += re[k] * s + im[k] * c
        out_re[j] = sr * scale
        out_im[j] = si * scale
    return out_re, out_im


def log_ratio_step(alpha, t):
    """One power-mean step in log-ratio form: t -> log cosh(alpha t) / alpha."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    for i in range(t.shape[0]):
        out[i] = logcosh(alpha * t[i]) / alpha
    return out


def pair_gap(w, g, t, u, v):
    """Cancellation-free sum_{i<j} w_i w_j (u_i v_j - u_j v_i)^2.

    Where g_i, g_j > 0 the pair term is written as 2 g_i g_j sinh(t_i - t_j)
    with u = g e^t, v = g e^-t; otherwise it is evaluated directly.
    """
    w = np.asarray(w, dtype=float)
    g = np.asarray(g, dtype=float)
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = w.shape[0]
    total = 0.0
    pos = g > 0.0
    for i in range(n - 1):
        j = np.arange(i + 1, n)
        both = pos[i] & pos[j]
        cross = np.where(both,
                         2.0 * g[i] * g[j] * np.sinh(t[i] - t[j]),
                         u[i] * v[j] - u[j] * v[i])
        total += w[i] * float(np.dot(w[j], cross * cross))
    return total


def theta3_sum(z, q, tail_tol):
    """1 + 2 sum q^{k^2} cos(2kz), stopping once 2 q^{k^2} < tail_tol."""
    if q == 0.0:
        return 1.0
    terms = [1.0]
    lq = math.log(q)
    k = 1
    while True:
        a = 2.0 * math.exp(lq * k * k)
        if a < tail_tol:
            break
        terms.append(a * math.cos(2.0 * k * z))
        k += 1
    return math.fsum(terms)
