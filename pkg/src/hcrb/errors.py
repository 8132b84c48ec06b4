"""Exception hierarchy shared by the bound solvers and the CLI."""


class HCRBError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(HCRBError, ValueError):
    """Operators have inconsistent shapes, non-finite entries or a bad trace."""


class DomainError(HCRBError, ValueError):
    """An input lies outside the domain of an operation (e.g. singular state)."""


class RankDeficiencyError(HCRBError, ArithmeticError):
    """A linear system is singular to working precision."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ConvergenceError(HCRBError, ArithmeticError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class HypothesisError(HCRBError):
    """A solver hypothesis such as full rank or derivative independence is violated.

    ``hypothesis`` names the violated assumption so that callers can report it.
    """

    def __init__(self, message, hypothesis):
        super().__init__(message)
        self.hypothesis = hypothesis


class ConfigError(StructuralError):
    """A scenario or run configuration is invalid before any model is built."""
