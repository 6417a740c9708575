""" Exceptions raised across the package.

Degenerate but valid outcomes (constant reconstructions, ties, solver
non-convergence) are reported through flags on result objects, not raised.
"""

from numpy.linalg import LinAlgError


class AADError(Exception):
    """Base class for all package errors."""


class ParameterError(AADError, ValueError):
    pass


class UnsupportedRateError(ParameterError):
    pass


class InsufficientDataError(AADError, ValueError):
    pass


class SingularSystemError(AADError, LinAlgError):
    pass


class IllConditionedError(AADError, LinAlgError):
    pass


class UndefinedTargetError(AADError, ValueError):
    pass


class DivergenceError(AADError, RuntimeError):
    pass


class DatasetError(AADError, IOError):
    pass


class ConfigError(AADError, ValueError):
    pass


class FoldError(AADError, RuntimeError):

    def __init__(self, message: str, subject_id=None, fold=None):
        super().__init__(message)
        self.subject_id = subject_id
        self.fold = fold
