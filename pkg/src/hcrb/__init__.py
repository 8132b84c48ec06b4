"""Holevo Cramer-Rao bounds for multi-parameter quantum estimation.

The main entry points are :func:`scalar_bounds` (SLD/RLD bounds),
:func:`simple_bounds` and :func:`optimize_u` (two parameters) and
:func:`multi_lower_bound` (any number of parameters).
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError, ConvergenceError, DomainError, HCRBError, HypothesisError, RankDeficiencyError, StructuralError,
)
from .model import ModelDiagnostics, StatisticalModel, finite_difference_check, validate
from .multi import MultiLowerReport, SignVector, multi_lower_bound
from .qcrb import QfimResult, scalar_bounds
from .simple import SimpleTwoParamReport, simple_bounds
from .tight import TightReport, evaluate_primal, optimize_u

__all__ = [
    "ConfigError", "ConvergenceError", "DomainError", "HCRBError", "HypothesisError", "RankDeficiencyError",
    "StructuralError", "ModelDiagnostics", "StatisticalModel", "finite_difference_check", "validate",
    "MultiLowerReport", "SignVector", "multi_lower_bound", "QfimResult", "scalar_bounds",
    "SimpleTwoParamReport", "simple_bounds", "TightReport", "evaluate_primal", "optimize_u",
]
