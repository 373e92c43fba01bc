"""Exception hierarchy. Each class maps onto one CLI exit code."""


class NovikovLabError(Exception):
    exit_code = 1


class UsageError(NovikovLabError, ValueError):
    """Bad arguments: mismatched jets, unsorted grids, invalid configs."""

    exit_code = 1


class InputError(UsageError):
    """Non-finite or otherwise unusable input data."""


class MonotonicityError(InputError):
    """Grid positions decrease by more than rounding-level jitter."""


class UnsupportedSeedError(UsageError):
    """Exact-mode angle whose base value is neither 0 nor pi."""


class TruncationError(NovikovLabError):
    """A vanishing order was not found within the truncation degree."""

    exit_code = 2


class DivergenceError(NovikovLabError):
    """The time integrator produced non-finite values."""

    exit_code = 3

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class ComparisonImpossibleError(NovikovLabError):
    """No shared pre-breaking window between the two solvers."""

    exit_code = 4


class BreakdownProximityError(NovikovLabError):
    """The x-space solver's slope cap was exceeded."""

    exit_code = 4


class WindowError(NovikovLabError, ValueError):
    """Too few samples inside an exponent-fit window."""


class DegenerateFitError(NovikovLabError, ValueError):
    """Samples in a fit window carry no spread in log-space."""
