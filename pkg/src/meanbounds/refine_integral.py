"""Integral and q-integral sandwich refinements of the Cauchy inequality."""

from __future__ import annotations

import math

import numpy as np

from .errors import DivergentSeries, DomainError
from .means import MeanKind
from .quadrature import (Integrand, QuadratureSpec, integrate, integrate_pieces,
                         sign_changes)
from .refine_discrete import CHAIN_TOL, RefinementChain, mean_and_complement

EPS = 2.220446049250313e-16
SAMPLE_POINTS = 257


def _grid_check_nonneg(f: Integrand, g: Integrand, a: float, b: float):
    x = np.linspace(a, b, SAMPLE_POINTS)
    if np.any(f(x) < 0) or np.any(g(x) < 0):
        raise DomainError(f"{f.label} or {g.label} is negative somewhere on [{a}, {b}]")


def _crossings(f: Integrand, g: Integrand, a: float, b: float) -> list:
    return sign_changes(lambda x: f(x) - g(x), a, b)


def _product_err(p, ep, q, eq):
    return abs(p) * eq + abs(q) * ep + ep * eq


def integral_refine(kind: MeanKind, f, g, quad: QuadratureSpec) -> RefinementChain:
    """(int f g)^2 <= int M(f,g)^2 * int M*(f,g)^2 <= int f^2 * int g^2.

    The five integrals are refined together; pieces are cut where f - g
    changes sign so that kinks of min/max-type means fall on cell edges.
    Verdicts allow 1e-9 * scale plus four times the propagated quadrature
    error estimate.
    """
    f = Integrand.of(f)
    g = Integrand.of(g)
    _grid_check_nonneg(f, g, quad.a, quad.b)

    def rows(x):
        fx = f(x)
        gx = g(x)
        m, mc = mean_and_complement(kind, fx, gx)
        return np.vstack([fx * gx, m * m, mc * mc, fx * fx, gx * gx])

    r = integrate_pieces(rows, quad, _crossings(f, g, quad.a, quad.b))
    s, mm, mmc, ff, gg = r.value
    es, em, emc, ef, eg = r.error
    lower = s * s
    middle = mm * mmc
    upper = ff * gg
    qerr = (2 * abs(s) * es + es * es) + _product_err(mm, em, mmc, emc) + _product_err(ff, ef, gg, eg)
    return RefinementChain.build(lower, middle, upper, CHAIN_TOL, 4.0 * qerr)


def _split_integrals(f, g, quad):
    """int f^2 and int g^2 over {f >= g} and {f < g}, with error estimates."""
    breaks = _crossings(f, g, quad.a, quad.b)
    edges = [quad.a] + breaks + [quad.b]
    plus = np.zeros(2)
    minus = np.zeros(2)
    err = np.zeros(2)

    def rows(x):
        fx = f(x)
        gx = g(x)
        return np.vstack([fx * fx, gx * gx])

    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        mid = 0.5 * (lo + hi)
        r = integrate(rows, quad.over(lo, hi))
        if f(mid) >= g(mid):
            plus += r.value
        else:
            minus += r.value
        err += r.error
    return plus, minus, err


def minmax_gap_identity(f, g, quad: QuadratureSpec) -> dict:
    """Check int f^2 int g^2 - int max^2 int min^2 = P * N for any signs.

    P = int_{f>=g} (f^2 - g^2) and N = int_{f<=g} (g^2 - f^2). The gap side
    is integrated on [a, b] as a whole while P and N come from region
    integrals cut at the crossings of f and g, so ``residual`` measures
    quadrature agreement. ``tolerance`` is the propagated quadrature error
    estimate plus a rounding floor of 64 eps times the chain scale.
    """
    f = Integrand.of(f)
    g = Integrand.of(g)

    def rows(x):
        fx = f(x)
        gx = g(x)
        hi = np.maximum(fx, gx)
        lo = np.minimum(fx, gx)
        return np.vstack([fx * fx, gx * gx, hi * hi, lo * lo])

    r = integrate(rows, quad)
    ff, gg, mx, mn = r.value
    ef, eg, emx, emn = r.error
    gap = ff * gg - mx * mn
    gap_err = _product_err(ff, ef, gg, eg) + _product_err(mx, emx, mn, emn)

    plus, minus, err = _split_integrals(f, g, quad)
    p = plus[0] - plus[1]
    n = minus[1] - minus[0]
    product = p * n
    prod_err = abs(p) * (err[0] + err[1]) + abs(n) * (err[0] + err[1])
    scale = max(abs(ff * gg), abs(mx * mn), 1e-300)
    tolerance = gap_err + prod_err + 64 * EPS * scale
    return {"gap": gap, "product": product, "residual": abs(gap - product),
            "quad_error": gap_err + prod_err, "tolerance": tolerance,
            "upper": ff * gg, "middle": mx * mn}


def minmax_refine_signed(f, g, quad: QuadratureSpec) -> dict:
    """Max/min chain for functions of any sign, labelled by the sign of f + g.

    direction is ``forward`` when f + g >= 0 on the sample grid, ``reversed``
    when f + g <= 0, and ``indeterminate`` otherwise; only the first two are
    ``certified``. The chain is invariant under (f, g) -> (-f, -g), since
    max(-f,-g) = -min(f,g), so in the reversed case the members coincide
    with those of the negated pair and the same ordering holds.
    """
    f = Integrand.of(f)
    g = Integrand.of(g)
    x = np.linspace(quad.a, quad.b, SAMPLE_POINTS)
    s = f(x) + g(x)
    if np.all(s >= 0):
        direction = "forward"
    elif np.all(s <= 0):
        direction = "reversed"
    else:
        direction = "indeterminate"

    def rows(x):
        fx = f(x)
        gx = g(x)
        hi = np.maximum(fx, gx)
        lo = np.minimum(fx, gx)
        return np.vstack([fx * gx, hi * hi, lo * lo, fx * fx, gx * gx])

    r = integrate_pieces(rows, quad, _crossings(f, g, quad.a, quad.b))
    sfg, mx, mn, ff, gg = r.value
    es, emx, emn, ef, eg = r.error
    qerr = (2 * abs(sfg) * es) + _product_err(mx, emx, mn, emn) + _product_err(ff, ef, gg, eg)
    chain = RefinementChain.build(sfg * sfg, mx * mn, ff * gg, CHAIN_TOL, 4.0 * qerr)
    return {"chain": chain, "direction": direction,
            "certified": direction != "indeterminate"}


def classical_mean_forms(f, g, quad: QuadratureSpec, p: float = 2.0) -> dict:
    """Cauchy, Hölder and Minkowski written as inequalities between means.

    Returns (lhs, rhs) pairs for
    J(G^2(f,g)) <= G(J(f^2), J(g^2)),
    J(G^2(f,g)) <= G_{1/p,1/q}(J(f^p), J(g^q)) and
    K(A^2(f,g)) <= A(K(f^2), K(g^2)),
    where J is the integral and K its square root.
    """
    if not p > 1:
        raise DomainError("Hölder exponent must exceed 1")
    q = p / (p - 1.0)
    f = Integrand.of(f)
    g = Integrand.of(g)
    _grid_check_nonneg(f, g, quad.a, quad.b)

    def rows(x):
        fx = f(x)
        gx = g(x)
        return np.vstack([fx * gx, fx * fx, gx * gx, fx ** p, gx ** q, (0.5 * (fx + gx)) ** 2])

    r = integrate(rows, quad)
    jfg, jf2, jg2, jfp, jgq, ja2 = r.value
    err = float(r.error.max())
    return {
        "cauchy": (jfg, math.sqrt(jf2 * jg2)),
        "holder": (jfg, jfp ** (1.0 / p) * jgq ** (1.0 / q)),
        "minkowski": (math.sqrt(ja2), 0.5 * (math.sqrt(jf2) + math.sqrt(jg2))),
        "quad_error": err,
    }


def _q_lattice(q: float, tail_tol: float, bound: float):
    """Nodes q^k and weights (1-q) q^k, k = 0..N, with bound * q^{N+1} <= tail_tol."""
    if bound <= tail_tol:
        n = 0
    else:
        n = max(0, math.ceil(math.log(tail_tol / bound) / math.log(q)) - 1)
    k = np.arange(n + 1, dtype=float)
    t = np.exp(k * math.log(q))
    return t, (1.0 - q) * t


def _sup_estimate(f: Integrand, q: float) -> float:
    probe = np.concatenate([np.linspace(1e-3, 1.0, 200), np.geomspace(1e-12, 1e-3, 40)])
    v = np.abs(f(probe))
    if not np.all(np.isfinite(v)):
        raise DivergentSeries(f"{f.label} is not finite near 0")
    near = np.abs(f(np.array([1e-6, 1e-9, 1e-12])))
    body = float(np.abs(f(np.linspace(1e-3, 1.0, 200))).max())
    if near[2] > near[1] > near[0] and near[2] > 1e3 * max(body, 1.0):
        raise DivergentSeries(f"{f.label} grows without bound as t -> 0+")
    return max(float(v.max()), 1e-300)


def jackson_integral(f, q: float, tail_tol: float = 1e-14) -> dict:
    """(1 - q) sum_k f(q^k) q^k truncated once sup|f| * q^{N+1} <= tail_tol."""
    if not 0 < q < 1:
        raise DomainError("q must lie in (0, 1)")
    if not tail_tol > 0:
        raise DomainError("tail_tol must be positive")
    f = Integrand.of(f)
    t, w = _q_lattice(q, tail_tol, _sup_estimate(f, q))
    return {"value": math.fsum(w * f(t)), "terms_used": int(t.size)}


def jackson_refine(kind: MeanKind, f, g, q: float, tail_tol: float = 1e-14) -> RefinementChain:
    """The refinement chain with every integral replaced by the q-integral."""
    if not 0 < q < 1:
        raise DomainError("q must lie in (0, 1)")
    f = Integrand.of(f)
    g = Integrand.of(g)
    bound = max(_sup_estimate(f, q), _sup_estimate(g, q)) ** 2
    t, w = _q_lattice(q, tail_tol, bound)
    fx = f(t)
    gx = g(t)
    if np.any(fx < 0) or np.any(gx < 0):
        raise DomainError("f and g must be nonnegative on the q-lattice")
    m, mc = mean_and_complement(kind, fx, gx)
    s = math.fsum(w * fx * gx)
    tail = 4.0 * tail_tol * bound
    return RefinementChain.build(s * s, math.fsum(w * m * m) * math.fsum(w * mc * mc),
                                 math.fsum(w * fx * fx) * math.fsum(w * gx * gx),
                                 CHAIN_TOL, tail)


def envelope_pair():
    """f = x, g = 1 - x on [0, 1], the standard example with three distinct members."""
    return (Integrand(lambda x: x, "x", True), Integrand(lambda x: 1.0 - x, "1-x", True))


__all__ = ["integral_refine", "minmax_gap_identity", "minmax_refine_signed",
           "classical_mean_forms", "jackson_integral", "jackson_refine", "envelope_pair",
           "Integrand", "QuadratureSpec"]
