"""Monotone two-sided bounds for (int f g)^2 by iterating a mean and its complement.

Starting from U_0 = f, V_0 = g the iteration is
U_{n+1} = M_alpha(U_n, V_n), V_{n+1} = M_{-alpha}(U_n, V_n), and
L_n = int V_n^2, G_n = int U_n^2, A_n = L_n G_n.

Functions live on a fixed composite Simpson grid. Since U_n V_n = f g at
every node, each node is stored as g0 = sqrt(f g) and a log-ratio t with
U = g0 e^t, V = g0 e^-t; one power-mean step is t -> log cosh(alpha t)/alpha.
The excess A_n - S^2 is accumulated pairwise as
sum_{i<j} w_i w_j (U_i V_j - U_j V_i)^2 with 2 g0_i g0_j sinh(t_i - t_j)
for the bracket, which avoids subtracting two nearly equal products.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._scalar import rado_log_ratio
from .errors import DomainError, QuadratureFailure
from .quadrature import Integrand, QuadratureSpec

REL_CHECK = 1e-12
START_INTERVALS = 64


@dataclass
class BoundTrace:
    alpha: float
    L: list
    G: list
    A: list
    s_estimate: float
    steps: int
    gap: list = field(default_factory=list)  # A_n - S^2, cancellation-free
    sup_gap: list = field(default_factory=list)  # max |U_n - V_n| on the grid
    nodes: int = 0
    mean: str = "power"

    def rows(self):
        return [(n, self.L[n], self.G[n], self.A[n]) for n in range(self.steps + 1)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "L", "G", "A"])
        for n, l, g, a in self.rows():
            w.writerow([n, f"{l:.17g}", f"{g:.17g}", f"{a:.17g}"])
        return buf.getvalue()


def simpson_weights(a: float, b: float, n: int) -> tuple:
    x = np.linspace(a, b, n + 1)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return x, w * (b - a) / (3.0 * n)


def _first_pair(fx, gx, w, alpha):
    # A_0 and A_1 on one grid
    a0 = float(w @ (fx * fx)) * float(w @ (gx * gx))
    g0 = np.sqrt(fx) * np.sqrt(gx)
    pos = g0 > 0
    t = np.zeros_like(g0)
    t[pos] = 0.5 * (np.log(fx[pos]) - np.log(gx[pos]))
    t1 = _kernels.log_ratio_step(alpha, t)
    u = g0 * np.exp(t1)
    v = g0 * np.exp(-t1)
    z = ~pos
    u[z] = np.maximum(fx[z], gx[z]) * 2.0 ** (-1.0 / alpha)
    v[z] = 0.0
    return a0, float(w @ (u * u)) * float(w @ (v * v))


def _choose_grid(f, g, quad: QuadratureSpec, alpha: float):
    """Composite Simpson grid on which A_0 and A_1 are stable under doubling."""
    if quad.rule == "composite":
        x, w = simpson_weights(quad.a, quad.b, quad.n)
        return x, w, f(x), g(x)
    n = START_INTERVALS
    x, w = simpson_weights(quad.a, quad.b, n)
    fx, gx = f(x), g(x)
    _check_values(fx, gx)
    prev = _first_pair(fx, gx, w, alpha)
    while True:
        if 2 * n + 1 > quad.max_nodes:
            raise QuadratureFailure(f"A_0, A_1 not stable to {quad.rel_tol} within {quad.max_nodes} nodes")
        n *= 2
        x, w = simpson_weights(quad.a, quad.b, n)
        fx, gx = f(x), g(x)
        _check_values(fx, gx)
        cur = _first_pair(fx, gx, w, alpha)
        if all(abs(c - p) <= quad.rel_tol * abs(c) + quad.abs_tol for c, p in zip(cur, prev)):
            return x, w, fx, gx
        prev = cur


def _check_values(fx, gx):
    if np.any(fx < 0) or np.any(gx < 0) or not (np.all(np.isfinite(fx)) and np.all(np.isfinite(gx))):
        raise DomainError("f and g must be finite and nonnegative on the grid")


def _rado_step(beta: float, t: np.ndarray) -> np.ndarray:
    # ln R_beta(e^t, e^-t) = -|t| + ln R_beta(e^{2|t|}, 1)
    out = np.empty_like(t)
    for i, ti in enumerate(t):
        d = 2.0 * abs(float(ti))
        out[i] = 0.0 if d == 0 else -0.5 * d + rado_log_ratio(beta, d)
    return out


def iterate_bounds(f, g, quad: QuadratureSpec, alpha: float, steps: int,
                   rado_beta: float | None = None, exact_gap: bool = True) -> BoundTrace:
    """Run the power-mean iteration for ``steps`` steps and record L, G, A.

    f and g must be nonnegative on the grid. At a node where f g = 0 the
    limits M_alpha(u, 0) = u 2^(-1/alpha) and M_-alpha(u, 0) = 0 are used.
    ``rado_beta`` switches to the experimental Radó iteration
    U' = R_beta(U, V), V' = U V / U', which needs f, g > 0 and carries no
    monotonicity guarantee. With ``exact_gap=False`` the O(N^2) pairwise
    excess is replaced by A_n - S^2 computed directly.
    """
    if not alpha > 0 and rado_beta is None:
        raise DomainError("alpha must be positive")
    if steps < 1:
        raise DomainError("steps must be >= 1")
    f = Integrand.of(f)
    g = Integrand.of(g)
    x, w, fx, gx = _choose_grid(f, g, quad, alpha if rado_beta is None else 1.0)
    _check_values(fx, gx)
    g0 = np.sqrt(fx) * np.sqrt(gx)
    pos = g0 > 0
    if rado_beta is not None and not np.all(pos):
        raise DomainError("the Radó iteration needs f, g > 0")
    t = np.zeros_like(g0)
    t[pos] = 0.5 * (np.log(fx[pos]) - np.log(gx[pos]))
    u = fx.copy()
    v = gx.copy()
    s = float(math.fsum(w * fx * gx))
    shrink = 2.0 ** (-1.0 / alpha) if rado_beta is None else None

    trace = BoundTrace(alpha=float(alpha), L=[], G=[], A=[], s_estimate=s, steps=steps,
                       nodes=int(x.size), mean="power" if rado_beta is None else f"rado:{rado_beta}")

    def record():
        lv = math.fsum(w * v * v)
        gu = math.fsum(w * u * u)
        trace.L.append(lv)
        trace.G.append(gu)
        trace.A.append(lv * gu)
        if exact_gap:
            trace.gap.append(_kernels.pair_gap(w, g0, t, u, v))
        else:
            trace.gap.append(lv * gu - s * s)
        trace.sup_gap.append(float(np.max(np.abs(u - v))))

    record()
    for _ in range(steps):
        if rado_beta is None:
            tp = _kernels.log_ratio_step(alpha, t[pos])
        else:
            tp = _rado_step(rado_beta, t[pos])
        t[pos] = tp
        u_new = np.empty_like(u)
        v_new = np.empty_like(v)
        u_new[pos] = g0[pos] * np.exp(tp)
        v_new[pos] = g0[pos] * np.exp(-tp)
        z = ~pos
        if z.any():
            u_new[z] = np.maximum(u[z], v[z]) * shrink
            v_new[z] = 0.0
        u, v = u_new, v_new
        record()
    return trace


def check_trace(trace: BoundTrace, rel: float = REL_CHECK) -> dict:
    """Verdicts on the chains S^2 <= A_n <= A_{n-1} and L_n <= S <= G_n."""
    s = trace.s_estimate
    gap = trace.gap
    it1 = all(gv >= 0.0 for gv in gap) and all(
        gap[n] <= gap[n - 1] * (1 + rel) + 1e-15 * trace.A[0] for n in range(1, len(gap)))

    def sandwich(n):
        return trace.L[n] <= s * (1 + rel) and s <= trace.G[n] * (1 + rel)

    start = trace.steps + 1
    for n in range(trace.steps, -1, -1):
        if sandwich(n):
            start = n
        else:
            break
    monotone = all(trace.L[n] <= trace.L[n + 1] * (1 + rel) and trace.G[n + 1] <= trace.G[n] * (1 + rel)
                   for n in range(1, trace.steps))
    if trace.steps >= 1 and gap[1] > 0:
        converging = gap[-1] < gap[1] / 2
    else:
        converging = gap[-1] <= gap[0]
    return {"it1_holds": bool(it1), "it2_holds_from": start,
            "monotone_from_1": bool(monotone), "converging": bool(converging)}
