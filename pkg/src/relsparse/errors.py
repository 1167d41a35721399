"""Exception hierarchy.

The CLI maps these onto stable exit codes (config 2, data 3, infeasible
selection 4, numerical failure 5), so scripts can branch on failure kind.
"""


class RelsparseError(Exception):
    """Base class for all package errors."""


class ConfigError(RelsparseError):
    """Invalid configuration value or combination."""


class DataError(RelsparseError):
    """Malformed, inconsistent, or degenerate input data."""


class SchemaError(DataError):
    """CSV header does not match the trajectory file schema."""


class ParseError(DataError):
    """A data row could not be parsed; the message names the row."""


class EmptyDatasetError(DataError):
    """File or slice contains no trajectories."""


class DegenerateCovariateError(DataError):
    """A covariate has zero sample variance and cannot be scaled."""


class DimensionError(DataError):
    """Vector or matrix dimensions do not agree."""


class SeparationError(DataError):
    """Action column contains a single class; logistic fit is unidentified."""


class BinningError(DataError):
    """Too few rows to form the requested number of calibration bins."""


class PositivityError(DataError):
    """A behavioral probability fell below the positivity floor."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class InfeasibleSelectionError(RelsparseError):
    """No grid point clears the minimum-value floor."""

    def __init__(self, message, best_value=None, vmin=None):
        super().__init__(message)
        self.best_value = best_value
        self.vmin = vmin


class NumericalError(RelsparseError):
    """Non-finite quantity or failed numerical procedure."""

    def __init__(self, message, iterate=None):
        super().__init__(message)
        self.iterate = iterate


class ConvergenceError(NumericalError):
    """Iteration budget exhausted before reaching tolerance."""
