# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Algorithms mirror meanbounds._scalar line for line."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, log1p, exp, expm1, sinh, sin, cos, sqrt, fabs, M_PI

from .._scalar import GL_NODES, GL_WEIGHTS

cnp.import_array()

cdef double LN2 = log(2.0)
cdef double _gl_x[12]
cdef double _gl_w[12]
for _i in range(12):
    _gl_x[_i] = GL_NODES[_i]
    _gl_w[_i] = GL_WEIGHTS[_i]


cdef inline double _logcosh(double z) nogil:
    cdef double s
    z = fabs(z)
    if z < 20.0:
        s = sinh(0.5 * z)
        return log1p(2.0 * s * s)
    return z - LN2 + log1p(exp(-2.0 * z))


cdef inline double _power_pos(double alpha, double x, double y) nogil:
    cdef double lx, ly
    if x == y:
        return x
    lx = log(x)
    ly = log(y)
    if (0.25 <= fabs(alpha) <= 50.0 and fabs(alpha * lx) < 600.0
            and fabs(alpha * ly) < 600.0):
        if alpha == 1.0:
            return 0.5 * x + 0.5 * y
        if alpha == -1.0:
            if x + y < 1e300:
                return 2.0 * x * y / (x + y)
            return 2.0 / (1.0 / x + 1.0 / y)
        return ((x ** alpha + y ** alpha) * 0.5) ** (1.0 / alpha)
    return exp(0.5 * (lx + ly) + _logcosh(alpha * 0.5 * (lx - ly)) / alpha)


cdef inline double _phi(double z) nogil:
    if z == 0.0:
        return 0.0
    if z > 30.0:
        return z - log(z) + log1p(-exp(-z))
    if z < -30.0:
        return log1p(-exp(z)) - log(-z)
    return log(expm1(z) / z)


cdef inline double _dphi(double z) nogil:
    cdef double z2
    if fabs(z) < 0.1:
        z2 = z * z
        return 0.5 + z * (1.0 / 12.0 + z2 * (-1.0 / 720.0 + z2 * (1.0 / 30240.0 - z2 / 1209600.0)))
    if z > 700.0:
        return 1.0 - 1.0 / z
    if z < -700.0:
        return -1.0 / z
    return 1.0 / (-expm1(-z)) - 1.0 / z


cdef inline double _rado_log_ratio(double beta, double d) nogil:
    cdef double bd, acc
    cdef int k
    if beta == -1.0:
        return _phi(d)
    if beta == 0.0:
        return d * _dphi(d)
    bd = fabs(beta) * d
    if d < 1e-7 and bd < 1e-6:
        return 0.5 * d + (beta + 2.0) * d * d / 24.0
    if bd <= 2.0:
        acc = 0.0
        for k in range(12):
            acc += _gl_w[k] * _dphi(d * (1.0 + beta * _gl_x[k]))
        return d * acc
    return (_phi((beta + 1.0) * d) - _phi(d)) / beta


cdef inline double _rado_pos(double beta, double x, double y) nogil:
    cdef double t
    if x == y:
        return x
    if x < y:
        t = x
        x = y
        y = t
    if beta == 1.0:
        return 0.5 * x + 0.5 * y
    return exp(log(y) + _rado_log_ratio(beta, log(x) - log(y)))


def power_mean_many(double alpha, xs, ys):
    cdef double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _power_pos(alpha, x[i], y[i])
    return out


def rado_mean_many(double beta, xs, ys):
    cdef double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _rado_pos(beta, x[i], y[i])
    return out


def dft_direct(re, im):
    cdef double[::1] ar = np.ascontiguousarray(re, dtype=np.float64)
    cdef double[::1] ai = np.ascontiguousarray(im, dtype=np.float64)
    cdef Py_ssize_t n = ar.shape[0], j, k
    out_re = np.empty(n)
    out_im = np.empty(n)
    cdef double[::1] br = out_re
    cdef double[::1] bi = out_im
    cdef double sr, si, ang, c, s
    cdef double scale = 1.0 / sqrt(<double>n)
    with nogil:
        for j in range(n):
            sr = 0.0
            si = 0.0
            for k in range(n):
                ang = -2.0 * M_PI * <double>((j * k) % n) / <double>n
                c = cos(ang)
                s = sin(ang)
                sr += ar[k] * c - ai[k] * s
                si += ar[k] * s + ai[k] * c
            br[j] = sr * scale
            bi[j] = si * scale
    return out_re, out_im


def log_ratio_step(double alpha, t):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _logcosh(alpha * tv[i]) / alpha
    return out


def pair_gap(w, g, t, u, v):
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = wv.shape[0], i, j
    cdef double total = 0.0, row, c
    with nogil:
        for i in range(n - 1):
            row = 0.0
            for j in range(i + 1, n):
                if gv[i] > 0.0 and gv[j] > 0.0:
                    c = 2.0 * gv[i] * gv[j] * sinh(tv[i] - tv[j])
                else:
                    c = uv[i] * vv[j] - uv[j] * vv[i]
                row += wv[j] * c * c
            total += wv[i] * row
    return total


def theta3_sum(double z, double q, double tail_tol):
    # Neumaier compensated summation
    cdef double s = 1.0, comp = 0.0, a, term, tmp, lq
    cdef long k = 1
    if q == 0.0:
        return 1.0
    lq = log(q)
    while True:
        a = 2.0 * exp(lq * <double>(k * k))
        if a < tail_tol:
            break
        term = a * cos(2.0 * <double>k * z)
        tmp = s + term
        if fabs(s) >= fabs(term):
            comp += (s - tmp) + term
        else:
            comp += (term - tmp) + s
        s = tmp
        k += 1
    return s + comp
