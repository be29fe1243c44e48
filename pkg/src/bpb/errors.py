"""Exception hierarchy shared by every module of the package."""


class BPBError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(BPBError, ValueError):
    pass


class NotPositive(BPBError, ValueError):
    pass


class DimensionTooLarge(BPBError, ValueError):
    pass


class ZeroOperator(BPBError, ValueError):
    pass


class InvalidMeasure(BPBError, ValueError):
    pass


class PreconditionViolated(BPBError, ValueError):
    """A hypothesis of a construction does not hold.

    ``hypothesis`` names the failing condition so callers can report it.
    """

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis


class EpsOutOfRange(PreconditionViolated):
    pass


class VectorOutOfBall(PreconditionViolated):
    pass


class NotUnitNorm(PreconditionViolated):
    pass


class NotNearNorming(PreconditionViolated):
    def __init__(self, message, deficit=None, threshold=None):
        super().__init__(message, hypothesis="near-norming")
        self.deficit = deficit
        self.threshold = threshold


class InternalInvariantError(BPBError, AssertionError):
    """A proof step that must hold on every accepted input failed.

    This always signals a bug, never a property of the data.
    """


class DegenerateNormalizer(InternalInvariantError):
    pass


class InputsEqual(BPBError, ValueError):
    pass


class NotUnitVectors(BPBError, ValueError):
    pass


class InfeasiblePerturbation(BPBError, RuntimeError):
    pass


class ParseError(BPBError, ValueError):
    def __init__(self, message, location=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class InvariantViolated(BPBError, ValueError):
    def __init__(self, message, invariant=None):
        super().__init__(message)
        self.invariant = invariant
