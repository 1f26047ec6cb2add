"""Exception hierarchy shared by all modules."""


class MorseFlowError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(MorseFlowError, ValueError):
    """Shapes or fields of the operands do not match."""


class PreconditionError(MorseFlowError, ValueError):
    """An input violates a stated precondition (membership, symmetry, range)."""


class SingularityError(MorseFlowError, ArithmeticError):
    """A matrix that has to be inverted is (numerically) singular."""


class ConditioningError(SingularityError):
    """The input is too ill-conditioned for the requested computation."""


class IndeterminateError(MorseFlowError, ArithmeticError):
    """A numerical decision (rank, eigenvalue membership) falls in an ambiguity band."""


class ConvergenceError(MorseFlowError, ArithmeticError):
    """An iteration failed to reach its target."""
