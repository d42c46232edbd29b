"""Mean-value refinements of the Cauchy-Schwarz inequality."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import (AdmissibilityError, DivergentSeries, DomainError, EvalError,
                     LengthMismatch, MeanBoundsError, NoConvergence, NonFiniteError,
                     ParseError, QuadratureFailure, ZeroVectorError)
from .means import (CATALOG, Complementary, Gini, Iterative, Lehmer, Max, MeanKind, Min,
                    Power, QuasiArithmetic, Rado, WeightedArithmetic, WeightedGeometric,
                    agm, check_axioms, eval_mean, format_mean, parse_mean)
from .quadrature import Integrand, QuadratureSpec
from .refine_discrete import RefinementChain, SequencePair, aczel_refine, cde_refine, dft_uncertainty
from .refine_integral import integral_refine, jackson_integral, jackson_refine, minmax_gap_identity
from .iterate_bounds import BoundTrace, iterate_bounds
from .special_fn import elliptic_bounds, elliptic_k, gamma_turan_chain, theta3, theta_min_bound
from .complexify import classify_point, sample_curve
from .expr import compile_expr, parse as parse_expr

__all__ = [
    "__version__", "BACKEND",
    "MeanBoundsError", "DomainError", "NonFiniteError", "NoConvergence", "LengthMismatch",
    "AdmissibilityError", "ZeroVectorError", "QuadratureFailure", "DivergentSeries",
    "ParseError", "EvalError",
    "MeanKind", "Power", "Rado", "Gini", "Lehmer", "WeightedArithmetic", "WeightedGeometric",
    "QuasiArithmetic", "Iterative", "Complementary", "Min", "Max", "CATALOG",
    "eval_mean", "check_axioms", "parse_mean", "format_mean", "agm",
    "Integrand", "QuadratureSpec", "RefinementChain", "SequencePair",
    "cde_refine", "aczel_refine", "dft_uncertainty",
    "integral_refine", "jackson_integral", "jackson_refine", "minmax_gap_identity",
    "BoundTrace", "iterate_bounds",
    "gamma_turan_chain", "elliptic_k", "elliptic_bounds", "theta3", "theta_min_bound",
    "classify_point", "sample_curve", "compile_expr", "parse_expr",
]
