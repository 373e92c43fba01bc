"""Conservative Novikov solutions in characteristic variables, with an exact
jet oracle for the local structure at wave-breaking points."""

from .errors import (
    BreakdownProximityError, ComparisonImpossibleError, DivergenceError,
    NovikovLabError, TruncationError, UsageError,
)

__version__ = "0.1.0"

__all__ = [
    "NovikovLabError", "UsageError", "TruncationError", "DivergenceError",
    "ComparisonImpossibleError", "BreakdownProximityError", "__version__",
]
