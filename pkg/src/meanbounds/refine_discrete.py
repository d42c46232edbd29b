"""Discrete sandwich refinements of the Cauchy inequality and related results."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import AdmissibilityError, DomainError, LengthMismatch, ZeroVectorError
from .means import MeanKind, eval_mean_many

CHAIN_TOL = 1e-9
EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class RefinementChain:
    lower: float
    middle: float
    upper: float
    lower_holds: bool
    upper_holds: bool
    slack_lower: float
    slack_upper: float

    @classmethod
    def build(cls, lower, middle, upper, tol=CHAIN_TOL, extra_tol=0.0):
        """Assemble a chain; verdicts allow tol * scale + extra_tol of slack."""
        lower, middle, upper = float(lower), float(middle), float(upper)
        scale = max(abs(lower), abs(middle), abs(upper))
        eps = tol * scale + extra_tol
        return cls(lower, middle, upper,
                   bool(lower <= middle + eps), bool(middle <= upper + eps),
                   middle - lower, upper - middle)

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds

    def as_dict(self) -> dict:
        return {"lower": self.lower, "middle": self.middle, "upper": self.upper,
                "lower_holds": self.lower_holds, "upper_holds": self.upper_holds,
                "slack_lower": self.slack_lower, "slack_upper": self.slack_upper}


@dataclass(frozen=True)
class SequencePair:
    xs: tuple
    ys: tuple

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise LengthMismatch(f"{len(self.xs)} x values but {len(self.ys)} y values")

    @classmethod
    def of(cls, xs, ys, nonneg=True):
        pair = cls(tuple(float(v) for v in xs), tuple(float(v) for v in ys))
        if nonneg and (any(v < 0 for v in pair.xs) or any(v < 0 for v in pair.ys)):
            raise DomainError("sequences must be nonnegative")
        return pair


def mean_and_complement(kind: MeanKind, xs, ys):
    """Arrays M(x_k, y_k) and M*(x_k, y_k), extending M* continuously to zeros.

    Where x_k y_k = 0 and M(x_k, y_k) > 0 the complement is 0. If M itself
    vanishes there, the closed-form complement of ``kind`` is used when it
    accepts zeros (Min -> Max, wgeom(w) -> wgeom(1-w), power:0 -> power:0),
    otherwise the limit is undefined and DomainError is raised.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    m = eval_mean_many(kind, xs, ys)
    prod = xs * ys
    mc = np.empty_like(m)
    pos = prod > 0
    mc[pos] = prod[pos] / m[pos]
    zero = ~pos
    if zero.any():
        need = zero & (m == 0)
        mc[zero & (m > 0)] = 0.0
        if need.any():
            comp = kind.complement()
            if not comp.allows_zero() or str(kind).startswith("compl("):
                raise DomainError(f"{kind}: complementary mean has no limit at a zero pair")
            mc[need] = eval_mean_many(comp, xs[need], ys[need])
    return m, mc


def _fsum_sq(v):
    return math.fsum(float(t) * float(t) for t in v)


def cde_refine(kind: MeanKind, pair: SequencePair) -> RefinementChain:
    """(sum x y)^2 <= sum M^2 * sum M*^2 <= sum x^2 * sum y^2."""
    if not pair.xs:
        raise DomainError("empty sequences")
    xs = np.asarray(pair.xs)
    ys = np.asarray(pair.ys)
    if np.any(xs < 0) or np.any(ys < 0):
        raise DomainError("sequences must be nonnegative")
    m, mc = mean_and_complement(kind, xs, ys)
    s = math.fsum(float(a) * float(b) for a, b in zip(xs, ys))
    return RefinementChain.build(s * s, _fsum_sq(m) * _fsum_sq(mc), _fsum_sq(xs) * _fsum_sq(ys))


def cde_condition_check(f: Callable[[float, float], float], samples: int = 1000,
                        seed: int = 0, tol: float = 1e-9) -> dict:
    """Test degree-2 homogeneity and the hybrid inequality for a function f.

    The hybrid inequality is
    y f(x,1) / (x f(y,1)) + x f(y,1) / (y f(x,1)) <= x/y + y/x.
    """
    rng = np.random.default_rng(seed)
    x = 10.0 ** rng.uniform(-2, 2, samples)
    y = 10.0 ** rng.uniform(-2, 2, samples)
    a = 10.0 ** rng.uniform(-1, 1, samples)
    homogeneous = True
    hybrid = True
    for xi, yi, ai in zip(x, y, a):
        v = f(xi, yi)
        if abs(f(ai * xi, ai * yi) - ai * ai * v) > tol * ai * ai * abs(v):
            homogeneous = False
        fx, fy = f(xi, 1.0), f(yi, 1.0)
        r = (yi * fx) / (xi * fy)
        lhs = r + 1.0 / r
        rhs = xi / yi + yi / xi
        if lhs > rhs * (1.0 + tol):
            hybrid = False
    return {"homogeneous": homogeneous, "hybrid_condition": hybrid}


def aczel_refine(kind: MeanKind, x: Sequence[float], y: Sequence[float]) -> RefinementChain:
    """Reverse chain (x0^2 - |x|^2)(y0^2 - |y|^2) <= (x0 y0 - sqrt A)^2 <= (x0 y0 - x.y)^2.

    ``A`` is the middle member of the discrete refinement for the tails.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} x values but {len(y)} y values")
    if len(x) < 2:
        raise DomainError("need a head entry and at least one tail entry")
    x0, y0 = float(x[0]), float(y[0])
    tail = SequencePair.of(x[1:], y[1:])
    dx = x0 * x0 - _fsum_sq(tail.xs)
    dy = y0 * y0 - _fsum_sq(tail.ys)
    if dx < 0 or dy < 0:
        raise AdmissibilityError(f"deficiencies must be nonnegative, got ({dx}, {dy})")
    inner = cde_refine(kind, tail)
    dot = math.fsum(a * b for a, b in zip(tail.xs, tail.ys))
    head = x0 * y0
    mid_root = head - math.sqrt(inner.middle)
    up_root = head - dot
    # both members are squares of differences with x0 y0; rounding there is eps * x0 y0
    err = 16 * EPS * abs(head)
    floor = err * (abs(mid_root) + abs(up_root) + err)
    return RefinementChain.build(dx * dy, mid_root ** 2, up_root ** 2, extra_tol=floor)


def dft(a) -> np.ndarray:
    """Unitary DFT b_j = n^{-1/2} sum_k a_k w^{-jk} by direct summation."""
    a = np.asarray(a, dtype=complex)
    re, im = _kernels.dft_direct(np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag))
    return re + 1j * im


def support_size(v, rel=1e-9) -> int:
    mag = np.abs(np.asarray(v))
    top = mag.max() if mag.size else 0.0
    return int(np.count_nonzero(mag > rel * top)) if top > 0 else 0


def dft_uncertainty(a, n: int | None = None) -> dict:
    """Support sizes A of a and B of its DFT, and the verdict A * B >= n."""
    a = np.asarray(a, dtype=complex)
    if n is None:
        n = a.shape[0]
    if n < 1 or a.shape[0] != n:
        raise LengthMismatch(f"vector has {a.shape[0]} entries, expected n={n}")
    if not np.any(a != 0):
        raise ZeroVectorError("the zero vector has no uncertainty relation")
    b = dft(a)
    sa = support_size(a)
    sb = support_size(b)
    return {"support_a": sa, "support_b": sb, "product": sa * sb,
            "holds": sa * sb >= n, "equality": sa * sb == n, "transform": b}


def pontryagin_identity_residual(x: Sequence[float], y: Sequence[float]) -> dict:
    """Both sides of the Lagrange-type identity for the (+,+,-,-) form."""
    if len(x) != 4 or len(y) != 4:
        raise LengthMismatch("the identity is for 4-vectors")
    x1, x2, x3, x4 = (float(v) for v in x)
    y1, y2, y3, y4 = (float(v) for v in y)
    dot = x1 * y1 + x2 * y2 - x3 * y3 - x4 * y4
    form = dot * dot - (x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4) * (y1 * y1 + y2 * y2 - y3 * y3 - y4 * y4)
    squares = ((y3 * x1 - x3 * y1) ** 2 + (x4 * y1 - x1 * y4) ** 2
               + (y3 * x2 - y2 * x3) ** 2 + (y2 * x4 - y4 * x2) ** 2
               - (y2 * x1 - y1 * x2) ** 2 - (y3 * x4 - x3 * y4) ** 2)
    return {"form_value": form, "squares_value": squares, "residual": abs(form - squares)}
