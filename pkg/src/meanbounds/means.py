"""Two-argument means: evaluation, complements, compound means and axioms.

Every mean is an immutable :class:`MeanKind` value with a canonical text
form (``power:0.5``, ``rado:-1``, ``gini:2:1``, ``compl(power:2)``,
``iter(power:1,power:0)``, ...) understood by :func:`parse_mean`.

Extended parameters are plain floats: ``math.inf`` and ``-math.inf`` select
the max/min members of the power and Radó scales, and ``0`` / ``-1`` select
the geometric, identric and logarithmic means by exact dispatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from ._scalar import gini_mean_pos, power_mean_pos, rado_mean_pos
from .errors import DomainError, NonFiniteError, NoConvergence, ParseError

AXIOM_TOL = 1e-9
AGM_TOL = 4 * 2.220446049250313e-16


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if float(v).is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(float(v))


class MeanKind:
    """Base class for two-argument means."""

    symmetric = True

    def allows_zero(self) -> bool:
        return False

    def complement(self) -> "MeanKind":
        """Closed-form complementary mean; falls back to the generic wrapper."""
        return Complementary(self)

    def _eval(self, x: float, y: float) -> float:
        raise NotImplementedError

    def _eval_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return np.array([self._eval(float(a), float(b)) for a, b in zip(xs, ys)])

    def __call__(self, x: float, y: float) -> float:
        return eval_mean(self, x, y)


@dataclass(frozen=True)
class Power(MeanKind):
    alpha: float

    def allows_zero(self):
        return self.alpha >= 0 or self.alpha == -math.inf

    def complement(self):
        return Power(-self.alpha) if self.alpha != 0 else self

    def _eval(self, x, y):
        a = self.alpha
        if a == math.inf:
            return max(x, y)
        if a == -math.inf:
            return min(x, y)
        if x == y:
            return x
        if a == 0:
            return math.sqrt(x) * math.sqrt(y)
        if x == 0 or y == 0:
            return max(x, y) * 2.0 ** (-1.0 / a)
        return power_mean_pos(a, x, y)

    def _eval_many(self, xs, ys):
        a = self.alpha
        if a == 0:
            return np.sqrt(xs) * np.sqrt(ys)
        if math.isinf(a):
            return np.maximum(xs, ys) if a > 0 else np.minimum(xs, ys)
        if np.all(xs > 0) and np.all(ys > 0):
            return _kernels.power_mean_many(a, xs, ys)
        return super()._eval_many(xs, ys)

    def __str__(self):
        return f"power:{_fmt(self.alpha)}"


@dataclass(frozen=True)
class Rado(MeanKind):
    beta: float

    def allows_zero(self):
        return self.beta > 0 or self.beta == -math.inf

    def _eval(self, x, y):
        b = self.beta
        if b == math.inf:
            return max(x, y)
        if b == -math.inf:
            return min(x, y)
        if x == y:
            return x
        if x == 0 or y == 0:
            return max(x, y) * (b + 1.0) ** (-1.0 / b)
        return rado_mean_pos(b, x, y)

    def _eval_many(self, xs, ys):
        b = self.beta
        if math.isinf(b):
            return np.maximum(xs, ys) if b > 0 else np.minimum(xs, ys)
        if np.all(xs > 0) and np.all(ys > 0):
            return _kernels.rado_mean_many(b, xs, ys)
        return super()._eval_many(xs, ys)

    def __str__(self):
        return f"rado:{_fmt(self.beta)}"


@dataclass(frozen=True)
class Gini(MeanKind):
    u: float
    v: float

    def allows_zero(self):
        return self.u > 0 and self.v > 0

    def complement(self):
        return Gini(-self.u, -self.v)

    def _eval(self, x, y):
        if x == 0 or y == 0:
            return max(x, y)
        return gini_mean_pos(self.u, self.v, x, y)

    def __str__(self):
        return f"gini:{_fmt(self.u)}:{_fmt(self.v)}"


@dataclass(frozen=True)
class Lehmer(MeanKind):
    """(x^{u+1} + y^{u+1}) / (x^u + y^u)."""

    u: float

    def allows_zero(self):
        return self.u > 0

    def complement(self):
        return Lehmer(-self.u - 1.0)

    def _eval(self, x, y):
        if x == 0 or y == 0:
            return max(x, y)
        return gini_mean_pos(self.u + 1.0, self.u, x, y)

    def __str__(self):
        return f"lehmer:{_fmt(self.u)}"


def _check_weight(w):
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"weight {w} outside [0, 1]")


@dataclass(frozen=True)
class WeightedArithmetic(MeanKind):
    """w x + (1 - w) y."""

    w: float

    def __post_init__(self):
        _check_weight(self.w)

    @property
    def symmetric(self):
        return self.w == 0.5

    def allows_zero(self):
        return True

    def _eval(self, x, y):
        return self.w * x + (1.0 - self.w) * y

    def __str__(self):
        return f"warith:{_fmt(self.w)}"


@dataclass(frozen=True)
class WeightedGeometric(MeanKind):
    """x^w y^(1-w)."""

    w: float

    def __post_init__(self):
        _check_weight(self.w)

    @property
    def symmetric(self):
        return self.w == 0.5

    def allows_zero(self):
        return True

    def complement(self):
        return WeightedGeometric(1.0 - self.w)

    def _eval(self, x, y):
        w = self.w
        if w == 1.0:
            return x
        if w == 0.0:
            return y
        if x == 0 or y == 0:
            return 0.0
        return math.exp(w * math.log(x) + (1.0 - w) * math.log(y))

    def __str__(self):
        return f"wgeom:{_fmt(self.w)}"


@dataclass(frozen=True)
class MonotoneFn:
    """Strictly monotone generator with its inverse on ``domain``."""

    forward: Callable[[float], float]
    inverse: Callable[[float], float]
    domain: tuple = (0.0, math.inf)
    name: str = "custom"

    def validate(self, grid=None, rel_tol=1e-10):
        """Spot-check strict monotonicity and the inverse on a sample grid."""
        lo, hi = self.domain
        if grid is None:
            a = max(lo, 1e-3)
            b = min(hi, 1e3)
            grid = np.geomspace(a, b, 41) if a > 0 else np.linspace(a, b, 41)
        vals = [self.forward(float(g)) for g in grid]
        diffs = np.diff(vals)
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise DomainError(f"generator {self.name} is not strictly monotone")
        for g, fv in zip(grid, vals):
            back = self.inverse(fv)
            if abs(back - g) > rel_tol * max(abs(g), 1e-300):
                raise DomainError(f"inverse of {self.name} fails at {g}: {back}")
        return True


GENERATORS = {
    "id": MonotoneFn(lambda t: t, lambda t: t, (0.0, math.inf), "id"),
    "ln": MonotoneFn(math.log, math.exp, (0.0, math.inf), "ln"),
    "exp": MonotoneFn(math.exp, math.log, (0.0, 700.0), "exp"),
    "recip": MonotoneFn(lambda t: 1.0 / t, lambda t: 1.0 / t, (0.0, math.inf), "recip"),
    "sqr": MonotoneFn(lambda t: t * t, math.sqrt, (0.0, math.inf), "sqr"),
}


@dataclass(frozen=True)
class QuasiArithmetic(MeanKind):
    """f^{-1}((f(x) + f(y)) / 2) for a monotone generator f."""

    generator: MonotoneFn

    def allows_zero(self):
        return self.generator.name in ("id", "sqr", "exp")

    def _eval(self, x, y):
        f = self.generator
        return f.inverse(0.5 * f.forward(x) + 0.5 * f.forward(y))

    def __str__(self):
        if GENERATORS.get(self.generator.name) is not self.generator:
            raise ValueError("custom generators have no canonical text form")
        return f"qa:{self.generator.name}"


def quasi_arithmetic_mean(generator: MonotoneFn, xs, weights=None) -> float:
    """n-ary weighted quasi-arithmetic mean f^{-1}(sum p_k f(x_k))."""
    xs = [float(v) for v in xs]
    if not xs:
        raise DomainError("empty input")
    if weights is None:
        weights = [1.0 / len(xs)] * len(xs)
    if len(weights) != len(xs):
        raise DomainError("weights and values differ in length")
    if any(p < 0 for p in weights) or abs(math.fsum(weights) - 1.0) > 1e-12:
        raise DomainError("weights must be nonnegative and sum to 1")
    return generator.inverse(math.fsum(p * generator.forward(v) for p, v in zip(weights, xs)))


@dataclass(frozen=True)
class Iterative(MeanKind):
    """Common limit of x <- M(x, y), y <- N(x, y)."""

    m: MeanKind
    n: MeanKind

    @property
    def symmetric(self):
        return self.m.symmetric and self.n.symmetric

    def allows_zero(self):
        return self.m.allows_zero() and self.n.allows_zero()

    def _eval(self, x, y):
        if x == 0 or y == 0:
            return _iterate(self.m, self.n, x, y, AGM_TOL, 2000, max(x, y))["value"]
        return iterate_mean(self.m, self.n, x, y)["value"]

    def __str__(self):
        return f"iter({self.m},{self.n})"


@dataclass(frozen=True)
class Complementary(MeanKind):
    """M*(x, y) = x y / M(x, y)."""

    inner: MeanKind

    @property
    def symmetric(self):
        return self.inner.symmetric

    def complement(self):
        return self.inner

    def _eval(self, x, y):
        return x * (y / eval_mean(self.inner, x, y))

    def __str__(self):
        return f"compl({self.inner})"


@dataclass(frozen=True)
class Min(MeanKind):
    def allows_zero(self):
        return True

    def complement(self):
        return Max()

    def _eval(self, x, y):
        return min(x, y)

    def _eval_many(self, xs, ys):
        return np.minimum(xs, ys)

    def __str__(self):
        return "min"


@dataclass(frozen=True)
class Max(MeanKind):
    def allows_zero(self):
        return True

    def complement(self):
        return Min()

    def _eval(self, x, y):
        return max(x, y)

    def _eval_many(self, xs, ys):
        return np.maximum(xs, ys)

    def __str__(self):
        return "max"


@dataclass(frozen=True)
class HMean(MeanKind):
    """Mean built from a profile function: M(x, y) = (x + y) h(ln(y / x)).

    This is the converse direction of the h-profile characterization; the
    result is a mean exactly when ``h`` is even, h(0) = 1/2 and the ratio
    bounds hold (use :func:`check_axioms` to test a candidate).
    """

    h: Callable[[float], float] = field(compare=False)
    label: str = "h"

    def _eval(self, x, y):
        return (x + y) * self.h(math.log(y) - math.log(x))

    def __str__(self):
        # not accepted by parse_mean: a profile function has no text form
        return f"hmean<{self.label}>"


def eval_mean(kind: MeanKind, x: float, y: float) -> float:
    """Evaluate ``kind`` at (x, y) with domain and finiteness checks."""
    x = float(x)
    y = float(y)
    if not (x >= 0 and y >= 0) or math.isnan(x) or math.isnan(y):
        raise DomainError(f"{kind}: inputs must be nonnegative, got ({x}, {y})")
    if (x == 0 or y == 0) and not kind.allows_zero():
        raise DomainError(f"{kind}: zero input needs strictly positive arguments")
    r = kind._eval(x, y)
    if not math.isfinite(r):
        raise NonFiniteError(f"{kind}({x}, {y}) evaluated to {r}")
    return r


def eval_mean_many(kind: MeanKind, xs, ys) -> np.ndarray:
    """Vectorized :func:`eval_mean`; routes power/Radó means to the kernels."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise DomainError("xs and ys differ in shape")
    if np.any(~(xs >= 0)) or np.any(~(ys >= 0)):
        raise DomainError(f"{kind}: inputs must be nonnegative")
    if not kind.allows_zero() and (np.any(xs == 0) or np.any(ys == 0)):
        raise DomainError(f"{kind}: zero input needs strictly positive arguments")
    out = kind._eval_many(xs, ys)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"{kind}: non-finite values in batch evaluation")
    return out


def complementary_eval(inner: MeanKind, x: float, y: float) -> float:
    """x y / M(x, y) for strictly positive x, y."""
    if not (x > 0 and y > 0):
        raise DomainError("complementary mean needs strictly positive inputs")
    return eval_mean(Complementary(inner), x, y)


def iterate_mean(m: MeanKind, n: MeanKind, x0: float, y0: float,
                 rel_tol: float = AGM_TOL, max_iter: int = 200) -> dict:
    """Run x <- M(x, y), y <- N(x, y) until |x - y| <= rel_tol * max(x, y).

    Raises NoConvergence when ``max_iter`` steps do not close the gap, which
    happens for non-contracting pairs such as (max, min).
    """
    if not (x0 > 0 and y0 > 0):
        raise DomainError("iterative means need strictly positive starting values")
    if rel_tol <= 0 or max_iter < 1:
        raise ValueError("rel_tol must be positive and max_iter >= 1")
    return _iterate(m, n, x0, y0, rel_tol, max_iter, None)


def _iterate(m, n, x0, y0, rel_tol, max_iter, fixed_scale):
    # fixed_scale replaces max(x, y) in the stopping test when a start value is 0
    x, y = float(x0), float(y0)
    for it in range(max_iter + 1):
        scale = max(x, y) if fixed_scale is None else fixed_scale
        if abs(x - y) <= rel_tol * scale:
            return {"value": 0.5 * (x + y), "iterations": it}
        if it == max_iter:
            break
        x, y = eval_mean(m, x, y), eval_mean(n, x, y)
    raise NoConvergence(f"iter({m},{n}) did not converge in {max_iter} steps "
                        f"from ({x0}, {y0}); last pair ({x}, {y})")


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of Gauss."""
    return iterate_mean(Power(1.0), Power(0.0), a, b)["value"]


@dataclass
class AxiomReport:
    intermediacy_violations: list = field(default_factory=list)
    reflexivity_violations: list = field(default_factory=list)
    homogeneity_violations: list = field(default_factory=list)
    monotonicity_violations: list = field(default_factory=list)
    samples_used: int = 0
    seed: int = 0

    @property
    def ok(self) -> bool:
        return not (self.intermediacy_violations or self.reflexivity_violations
                    or self.homogeneity_violations or self.monotonicity_violations)


def check_axioms(kind: MeanKind, samples: int = 1000, seed: int = 0,
                 tol: float = AXIOM_TOL) -> AxiomReport:
    """Sample-based check of intermediacy, reflexivity, homogeneity, monotonicity.

    Pairs are log-uniform on [1e-3, 1e3], scale factors log-uniform on
    [1e-2, 1e2]; the monotonicity probe raises one argument by a random
    factor in (1, 2).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    x = 10.0 ** rng.uniform(-3, 3, samples)
    y = 10.0 ** rng.uniform(-3, 3, samples)
    a = 10.0 ** rng.uniform(-2, 2, samples)
    bump = 1.0 + rng.uniform(0, 1, samples)

    m = eval_mean_many(kind, x, y)
    mxx = eval_mean_many(kind, x, x)
    mscaled = eval_mean_many(kind, a * x, a * y)
    mx2 = eval_mean_many(kind, x * bump, y)
    my2 = eval_mean_many(kind, x, y * bump)

    rep = AxiomReport(samples_used=samples, seed=seed)
    lo = np.minimum(x, y)
    hi = np.maximum(x, y)
    for i in np.nonzero((m < lo - tol * hi) | (m > hi + tol * hi))[0]:
        rep.intermediacy_violations.append({"x": x[i], "y": y[i], "value": m[i]})
    for i in np.nonzero(np.abs(mxx - x) > tol * x)[0]:
        rep.reflexivity_violations.append({"x": x[i], "value": mxx[i]})
    for i in np.nonzero(np.abs(mscaled - a * m) > tol * a * m)[0]:
        rep.homogeneity_violations.append(
            {"x": x[i], "y": y[i], "a": a[i], "value": mscaled[i], "expected": a[i] * m[i]})
    bad = (mx2 < m - tol * m) | (my2 < m - tol * m)
    for i in np.nonzero(bad)[0]:
        rep.monotonicity_violations.append(
            {"x": x[i], "y": y[i], "bump": bump[i], "value": m[i],
             "value_x_raised": mx2[i], "value_y_raised": my2[i]})
    return rep


# -- canonical text form -----------------------------------------------------

def _num(tok: str, text: str, offset: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"bad number {tok!r} in {text!r}", offset, {"number"}) from None


def _split_args(body: str, base: int, text: str) -> list:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((body[start:i], base + start))
            start = i + 1
    parts.append((body[start:], base + start))
    return parts


def _parse(text: str, s: str, base: int) -> MeanKind:
    s_stripped = s.strip()
    base += len(s) - len(s.lstrip())
    s = s_stripped
    for name in ("compl", "iter"):
        if s.startswith(name + "("):
            if not s.endswith(")"):
                raise ParseError(f"unclosed {name}( in {text!r}", base + len(s), {")"})
            inner = s[len(name) + 1:-1]
            args = _split_args(inner, base + len(name) + 1, text)
            if name == "compl":
                if len(args) != 1:
                    raise ParseError("compl takes one mean", args[1][1], {")"})
                return Complementary(_parse(text, *args[0]))
            if len(args) != 2:
                raise ParseError("iter takes two means", base + len(s), {","})
            return Iterative(_parse(text, *args[0]), _parse(text, *args[1]))
    head, _, rest = s.partition(":")
    params = rest.split(":") if rest else []
    arity = {"power": 1, "rado": 1, "gini": 2, "lehmer": 1, "warith": 1, "wgeom": 1,
             "qa": 1, "min": 0, "max": 0}
    if head not in arity:
        raise ParseError(f"unknown mean {head!r}", base, set(arity) | {"compl", "iter"})
    if len(params) != arity[head]:
        raise ParseError(f"{head} takes {arity[head]} parameter(s)", base + len(head), {":"})
    off = base + len(head) + 1
    if head == "min":
        return Min()
    if head == "max":
        return Max()
    if head == "qa":
        if params[0] not in GENERATORS:
            raise ParseError(f"unknown generator {params[0]!r}", off, set(GENERATORS))
        return QuasiArithmetic(GENERATORS[params[0]])
    vals = [_num(p, text, off) for p in params]
    cls = {"power": Power, "rado": Rado, "gini": Gini, "lehmer": Lehmer,
           "warith": WeightedArithmetic, "wgeom": WeightedGeometric}[head]
    return cls(*vals)


def parse_mean(text: str) -> MeanKind:
    """Parse the canonical text form; ``str(parse_mean(t)) == t`` for canonical t."""
    if not text or not text.strip():
        raise ParseError("empty mean string", 0, {"mean"})
    return _parse(text, text, 0)


def format_mean(kind: MeanKind) -> str:
    return str(kind)


CATALOG = (
    Power(1.0), Power(0.0), Power(-1.0), Power(2.0), Power(1.0 / 3.0),
    Rado(-1.0), Rado(0.0), Rado(2.0),
    Gini(2.0, 1.0), Lehmer(-0.5),
    WeightedArithmetic(0.3), WeightedGeometric(0.7),
    Min(), Max(), Iterative(Power(1.0), Power(0.0)),
    QuasiArithmetic(GENERATORS["ln"]),
)
