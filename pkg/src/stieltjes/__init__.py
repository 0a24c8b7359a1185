"""Numerical Stieltjes calculus on finite working windows.

The package revolves around *derivators*: nondecreasing left-continuous maps
``g`` that replace time in differentiation and integration.  It provides

* ``Derivator`` / ``Classification`` — finite representations, sums, and the
  constancy/discontinuity classification (`derivator`),
* Lebesgue-Stieltjes measures and integrals of interval unions (`measure`),
* numerical Stieltjes derivatives and the fundamental-theorem round trip
  (`derivative`),
* derivator-topology comparisons via the classification (`topology`),
* Osgood moduli, the iterated-logarithm family, and Bihari-type bounds
  (`moduli`),
* solvers for systems in which each component has its own derivator, with
  residual diagnostics, a-priori bounds, and sampled uniqueness certificates
  (`solver`),
* a small expression language so whole problems can live in files (`expr`,
  `problem_io`), and a command-line front end (`cli`).
"""

from .derivator import Classification, Derivator, classify, from_classification, sum_derivators
from .errors import (
    BoundInapplicableError,
    ConfigurationError,
    DerivativeUndefinedError,
    DomainExitError,
    ExprDomainError,
    ExprParseError,
    IntegrandError,
    ModulusOverflowError,
    NoCertifiedHorizonError,
    NoDerivativeError,
    NonConvergenceError,
    ProblemFileError,
    RightLimitError,
    SolverError,
    StieltjesError,
    WindowDomainError,
)
from .measure import QuadratureConfig, disjointify, integrate, measure_interval, outer_measure

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "Derivator",
    "classify",
    "from_classification",
    "sum_derivators",
    "QuadratureConfig",
    "disjointify",
    "integrate",
    "measure_interval",
    "outer_measure",
    "BoundInapplicableError",
    "ConfigurationError",
    "DerivativeUndefinedError",
    "DomainExitError",
    "ExprDomainError",
    "ExprParseError",
    "IntegrandError",
    "ModulusOverflowError",
    "NoCertifiedHorizonError",
    "NoDerivativeError",
    "NonConvergenceError",
    "ProblemFileError",
    "RightLimitError",
    "SolverError",
    "StieltjesError",
    "WindowDomainError",
    "__version__",
]
