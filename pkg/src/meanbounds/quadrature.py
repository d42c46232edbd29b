"""Adaptive and composite Simpson quadrature for (vector-valued) integrands.

Integrands take a 1-D array of abscissae and return either an array of the
same length or a 2-D array with one row per component. All components are
refined together on a shared set of cells. Cells are processed level by
level, left to right, and accepted contributions are summed with
``math.fsum`` in position order, so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, QuadratureFailure

ADAPTIVE = "adaptive_simpson"


@dataclass(frozen=True)
class QuadratureSpec:
    a: float = 0.0
    b: float = 1.0
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_nodes: int = 200_000
    rule: str = ADAPTIVE
    n: int = 0  # interval count for the composite rule

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise DomainError(f"need finite a < b, got [{self.a}, {self.b}]")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_nodes < 16:
            raise DomainError("max_nodes must be at least 16")
        if self.rule not in (ADAPTIVE, "composite"):
            raise DomainError(f"unknown rule {self.rule!r}")
        if self.rule == "composite" and (self.n < 2 or self.n % 2):
            raise DomainError("composite Simpson needs an even interval count n >= 2")

    @classmethod
    def composite(cls, a, b, n, **kw):
        return cls(a, b, rule="composite", n=n, **kw)

    def over(self, a, b) -> "QuadratureSpec":
        return QuadratureSpec(a, b, self.abs_tol, self.rel_tol, self.max_nodes, self.rule, self.n)


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray  # one entry per component
    error: np.ndarray
    nodes: int

    def scalar(self):
        return float(self.value[0]), float(self.error[0])


@dataclass(frozen=True)
class Integrand:
    """Real function of one variable with a label for reports."""

    eval: Callable
    label: str = "f"
    vectorized: bool = False

    def __call__(self, x):
        if np.ndim(x) == 0:
            return float(self.eval(float(x)))
        x = np.asarray(x, dtype=float)
        if self.vectorized:
            return np.broadcast_to(np.asarray(self.eval(x), dtype=float), x.shape).copy()
        return np.array([float(self.eval(float(t))) for t in x])

    @classmethod
    def of(cls, fn, label=None, vectorized=False):
        if isinstance(fn, Integrand):
            return fn
        if isinstance(fn, (int, float)):
            c = float(fn)
            return cls(lambda x: np.full(np.shape(x), c), label or repr(c), True)
        return cls(fn, label or getattr(fn, "__name__", "f"), vectorized)

    def negated(self) -> "Integrand":
        return Integrand(lambda x: -self.eval(x), f"-({self.label})", self.vectorized)


def _as_rows(vals, m):
    vals = np.asarray(vals, dtype=float)
    if vals.ndim == 1:
        vals = vals[None, :]
    if vals.shape[1] != m:
        raise ValueError("integrand returned the wrong number of values")
    if not np.all(np.isfinite(vals)):
        raise QuadratureFailure("integrand produced non-finite values")
    return vals


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def integrate(func: Callable, spec: QuadratureSpec) -> QuadResult:
    """Integrate ``func`` over [spec.a, spec.b] with the rule in ``spec``."""
    if spec.rule == "composite":
        return _composite(func, spec)
    return _adaptive(func, spec)


def _composite(func, spec):
    n = spec.n
    x = np.linspace(spec.a, spec.b, n + 1)
    f = _as_rows(func(x), n + 1)
    h = (spec.b - spec.a) / n
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    full = h / 3.0 * (f @ w)
    if n % 4 == 0:
        w2 = np.ones(n // 2 + 1)
        w2[1:-1:2] = 4.0
        w2[2:-1:2] = 2.0
        half = 2.0 * h / 3.0 * (f[:, ::2] @ w2)
        err = np.abs(full - half) / 15.0
    else:
        err = np.full(full.shape, np.nan)
    return QuadResult(full, err, n + 1)


def _adaptive(func, spec, min_cells=16, min_width=1e-12):
    a, b = spec.a, spec.b
    x = np.linspace(a, b, 2 * min_cells + 1)
    f = _as_rows(func(x), x.size)
    nodes = x.size
    width = b - a
    # cell record: (left, right, f_left, f_mid, f_right), values as column vectors
    lefts = x[0:-1:2]
    rights = x[2::2]
    fl = f[:, 0:-1:2]
    fm = f[:, 1::2]
    fr = f[:, 2::2]
    whole = _simpson(fl, fm, fr, rights - lefts)
    # scale for the relative tolerance: integral of |f| on the coarse grid
    scale = np.abs(whole).sum(axis=1)
    tol = np.maximum(spec.abs_tol, spec.rel_tol * scale)
    accepted = []  # (left, value vector, error vector)
    while lefts.size:
        h = rights - lefts
        q1 = lefts + 0.25 * h
        q3 = lefts + 0.75 * h
        pts = np.empty(2 * lefts.size)
        pts[0::2] = q1
        pts[1::2] = q3
        if nodes + pts.size > spec.max_nodes:
            raise QuadratureFailure(
                f"adaptive Simpson exhausted {spec.max_nodes} nodes on [{a}, {b}]")
        fq = _as_rows(func(pts), pts.size)
        nodes += pts.size
        f1 = fq[:, 0::2]
        f3 = fq[:, 1::2]
        left = _simpson(fl, f1, fm, 0.5 * h)
        right = _simpson(fm, f3, fr, 0.5 * h)
        diff = left + right - whole
        err = np.abs(diff) / 15.0
        local_tol = tol[:, None] * (h / width)
        ok = np.all(err <= local_tol, axis=0) | (h < min_width)
        est = left + right + diff / 15.0
        for i in np.nonzero(ok)[0]:
            accepted.append((lefts[i], est[:, i], err[:, i]))
        keep = ~ok
        mids = 0.5 * (lefts + rights)
        lefts = np.concatenate([lefts[keep], mids[keep]])
        rights = np.concatenate([mids[keep], rights[keep]])
        fl, fm, fr, whole = (np.concatenate([fl[:, keep], fm[:, keep]], axis=1),
                             np.concatenate([f1[:, keep], f3[:, keep]], axis=1),
                             np.concatenate([fm[:, keep], fr[:, keep]], axis=1),
                             np.concatenate([left[:, keep], right[:, keep]], axis=1))
        order = np.argsort(lefts, kind="stable")
        lefts, rights = lefts[order], rights[order]
        fl, fm, fr, whole = fl[:, order], fm[:, order], fr[:, order], whole[:, order]
    accepted.sort(key=lambda c: c[0])
    m = f.shape[0]
    value = np.array([math.fsum(c[1][k] for c in accepted) for k in range(m)])
    error = np.array([math.fsum(c[2][k] for c in accepted) for k in range(m)])
    return QuadResult(value, error, nodes)


def integrate_pieces(func: Callable, spec: QuadratureSpec, breaks: Sequence[float]) -> QuadResult:
    """Integrate separately over the pieces cut at ``breaks`` and add up."""
    edges = [spec.a] + sorted(t for t in breaks if spec.a < t < spec.b) + [spec.b]
    parts = []
    budget = spec.max_nodes
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 0:
            continue
        sub = QuadratureSpec(lo, hi, spec.abs_tol * (hi - lo) / (spec.b - spec.a),
                             spec.rel_tol, max(16, budget), spec.rule,
                             spec.n)
        r = integrate(func, sub)
        budget -= r.nodes
        if budget < 0:
            raise QuadratureFailure(f"node budget {spec.max_nodes} exhausted")
        parts.append(r)
    value = np.array([math.fsum(p.value[k] for p in parts) for k in range(parts[0].value.size)])
    error = np.array([math.fsum(p.error[k] for p in parts) for k in range(parts[0].value.size)])
    return QuadResult(value, error, sum(p.nodes for p in parts))


def sign_changes(h: Callable, a: float, b: float, grid: int = 1024,
                 width: float = 1e-12, max_bisect: int = 200) -> list:
    """Points where the vectorized function ``h`` changes sign on [a, b].

    Sign changes are located on a uniform grid and each bracket is bisected
    down to ``width``. A grid point where h is exactly zero counts only if
    its neighbours have opposite signs.
    """
    x = np.linspace(a, b, grid + 1)
    v = np.asarray(h(x), dtype=float)
    s = np.sign(v)
    roots = []
    for i in range(grid):
        if s[i] == 0:
            if 0 < i and s[i - 1] * s[i + 1] < 0:
                roots.append(float(x[i]))
            continue
        if s[i] * s[i + 1] < 0:
            lo, hi = float(x[i]), float(x[i + 1])
            slo = s[i]
            for _ in range(max_bisect):
                if hi - lo < width:
                    break
                mid = 0.5 * (lo + hi)
                sm = np.sign(float(np.asarray(h(np.array([mid])))[0]))
                if sm == 0:
                    lo = hi = mid
                    break
                if sm == slo:
                    lo = mid
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    return roots
