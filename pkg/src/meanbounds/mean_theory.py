"""Comparison of the Radó and power scales, h-profiles of means, entropies."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .means import (Gini, MeanKind, Power, Rado, WeightedGeometric, eval_mean,
                    eval_mean_many)

LN2 = math.log(2.0)
VIOLATION_TOL = 1e-9
RATIO_TOL = 1e-12

REGIMES = ("(-inf,-2]", "[-2,-1]", "(-1,-1/2]", "[-1/2,1)", "[1,inf]")


@dataclass(frozen=True)
class PowerEnvelope:
    """M_lower <= R_alpha <= M_upper with the best constant exponents."""

    lower_exponent: float
    upper_exponent: float
    regime: str


@dataclass(frozen=True)
class HProfile:
    t: float
    h: float


def _log_exponent(alpha: float) -> float:
    # alpha ln2 / ln(1 + alpha), continuous through alpha = 0
    if alpha == 0:
        return LN2
    if math.isinf(alpha):
        return math.inf
    return alpha * LN2 / math.log1p(alpha)


def rado_power_envelope(alpha: float) -> PowerEnvelope:
    """Sharp power-mean exponents bracketing R_alpha, for alpha in [-inf, inf]."""
    a = float(alpha)
    if math.isnan(a):
        raise DomainError("alpha is NaN")
    third = (a + 2.0) / 3.0 if math.isfinite(a) else a
    if a <= -2.0:
        return PowerEnvelope(third, 0.0, REGIMES[0])
    if a <= -1.0:
        return PowerEnvelope(0.0, third, REGIMES[1])
    if a <= -0.5:
        return PowerEnvelope(_log_exponent(a), third, REGIMES[2])
    if a < 1.0:
        return PowerEnvelope(third, _log_exponent(a), REGIMES[3])
    return PowerEnvelope(_log_exponent(a), third, REGIMES[4])


def _log_uniform_pairs(samples, seed, ratio_range=None):
    rng = np.random.default_rng(seed)
    x = 10.0 ** rng.uniform(-3, 3, samples)
    if ratio_range is None:
        y = 10.0 ** rng.uniform(-3, 3, samples)
    else:
        lo, hi = ratio_range
        y = x * np.exp(rng.uniform(math.log(lo), math.log(hi), samples))
    return x, y


def verify_envelope(alpha: float, samples: int = 10_000, seed: int = 0,
                    ratio_range=None) -> dict:
    """Check M_lower <= R_alpha <= M_upper on log-uniform positive pairs.

    ``max_slack`` is the smallest relative gap seen on either side, a witness
    of how tight the envelope is on the sample; the per-side minima are
    returned as ``lower_slack`` and ``upper_slack``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    env = rado_power_envelope(alpha)
    x, y = _log_uniform_pairs(samples, seed, ratio_range)
    r = eval_mean_many(Rado(float(alpha)), x, y)
    lo = eval_mean_many(Power(env.lower_exponent), x, y)
    hi = eval_mean_many(Power(env.upper_exponent), x, y)
    rel_lo = (r - lo) / r
    rel_hi = (hi - r) / r
    violations = []
    for i in np.nonzero((rel_lo < -VIOLATION_TOL) | (rel_hi < -VIOLATION_TOL))[0]:
        violations.append({"x": float(x[i]), "y": float(y[i]), "rado": float(r[i]),
                           "lower": float(lo[i]), "upper": float(hi[i])})
    # pairs with x == y carry no information about tightness
    informative = x != y
    ls = float(rel_lo[informative].min()) if informative.any() else 0.0
    us = float(rel_hi[informative].min()) if informative.any() else 0.0
    return {"violations": violations, "max_slack": min(ls, us),
            "lower_slack": ls, "upper_slack": us, "envelope": env}


def common_scale_means() -> list:
    """(alpha, beta) with M_alpha identical to R_beta."""
    # M_1/2 pairs with R_-1/2: ((sqrt x - sqrt y) / ((x - y)/2))^-2 = ((sqrt x + sqrt y)/2)^2
    return [(-math.inf, -math.inf), (0.0, -2.0), (0.5, -0.5), (1.0, 1.0), (math.inf, math.inf)]


def h_profile(kind: MeanKind, t: float) -> HProfile:
    """h(t) = M(1, e^t) / (1 + e^t)."""
    et = math.exp(t)
    return HProfile(t, eval_mean(kind, 1.0, et) / (1.0 + et))


def check_characterization(kind: MeanKind, t1: float, t2: float) -> bool:
    """Ratio bounds on h(t1)/h(t2) for 0 <= t1 <= t2, absolute tolerance 1e-12.

    Only symmetric means are covered; asymmetric kinds raise DomainError.
    """
    if not kind.symmetric:
        raise DomainError(f"{kind} is not symmetric; the h-profile test does not apply")
    if not 0 <= t1 <= t2:
        raise DomainError("need 0 <= t1 <= t2")
    ratio = h_profile(kind, t1).h / h_profile(kind, t2).h
    # e^{t1}(e^{t2}+1) / (e^{t2}(e^{t1}+1)) written without overflow
    lower = math.exp(t1 - t2) * (1.0 + math.exp(-t2)) / (1.0 + math.exp(-t1)) \
        if t2 > 0 else 1.0
    upper = (math.exp(t2) + 1.0) / (math.exp(t1) + 1.0)
    return lower - RATIO_TOL <= ratio <= upper + RATIO_TOL


def shannon_mean(p1: float) -> MeanKind:
    """Weighted geometric mean whose entropy is the Shannon entropy."""
    return WeightedGeometric(p1)


def renyi_mean(alpha: float) -> MeanKind:
    """Gini mean ((x + y)/(x^a + y^a))^(1/(1-a)) giving the Rényi entropy."""
    if alpha == 1:
        raise DomainError("Rényi order 1 is the Shannon case; use shannon_mean")
    return Gini(1.0, float(alpha))


def entropy_from_mean(kind: MeanKind, p1: float, p2: float) -> float:
    """H = -ln M(p1, p2) for a two-point distribution."""
    if not (p1 > 0 and p2 > 0):
        raise DomainError("probabilities must be positive")
    if abs(p1 + p2 - 1.0) > 1e-12:
        raise DomainError(f"p1 + p2 = {p1 + p2} is not 1")
    return -math.log(eval_mean(kind, p1, p2))


def shannon_entropy(p1: float) -> float:
    return entropy_from_mean(shannon_mean(p1), p1, 1.0 - p1)


def renyi_entropy(alpha: float, p1: float) -> float:
    return entropy_from_mean(renyi_mean(alpha), p1, 1.0 - p1)
