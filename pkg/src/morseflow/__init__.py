"""Integrable gradient flows on matrix groups and symmetric spaces."""
from .errors import (
    ConditioningError,
    ConvergenceError,
    DimensionError,
    IndeterminateError,
    MorseFlowError,
    PreconditionError,
    SingularityError,
)
from .matrix_core import Field, GroupSpec, Mat
from .tolerances import DEFAULT_TOL, Tolerances

__all__ = [
    "ConditioningError",
    "ConvergenceError",
    "DEFAULT_TOL",
    "DimensionError",
    "Field",
    "GroupSpec",
    "IndeterminateError",
    "Mat",
    "MorseFlowError",
    "PreconditionError",
    "SingularityError",
    "Tolerances",
]

__version__ = "0.1.0"
