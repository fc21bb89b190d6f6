"""Exception hierarchy shared by all plqi modules."""


class PLQIError(Exception):
    """Base class for every error raised by plqi."""


class DegenerateSimplex(PLQIError):
    pass


class DimensionTooLow(PLQIError):
    pass


class WeightSumViolation(PLQIError):
    pass


class InvalidComplex(PLQIError):
    pass


class NotInCarrier(PLQIError):
    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"point {list(point)} lies in no simplex of the carrier")


class NotSimplicial(PLQIError):
    def __init__(self, message, offending=()):
        self.offending = tuple(offending)
        super().__init__(message)


class NotBijective(PLQIError):
    pass


class IncompatibleComplexes(PLQIError):
    pass


class DegenerateEdge(PLQIError):
    pass


class ThetaOutOfRange(PLQIError):
    pass


class ParameterRangeError(PLQIError):
    pass


class EvaluationFailure(PLQIError):
    def __init__(self, sample, cause):
        self.sample = sample
        self.cause = cause
        super().__init__(f"evaluation failed at {sample!r}: {cause}")


class NoFiniteConstant(PLQIError):
    def __init__(self, message, estimate=None):
        self.estimate = estimate
        super().__init__(message)


class NoDivergentSequence(PLQIError):
    pass


class InvalidDiscSequence(PLQIError):
    pass


class FormatError(PLQIError):
    """Raised when an input file does not match its declared schema."""
