"""Exception hierarchy.

Numeric-domain failures (cutoff too small, divergent series, precision loss)
share a base class so the CLI can map them to a single exit status.
"""


class SqueezeLabError(Exception):
    pass


class ParameterError(SqueezeLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidCutoffError(ParameterError):
    pass


class DimensionError(ParameterError):
    pass


class PreconditionError(ParameterError):
    pass


class DegenerateStateError(ParameterError):
    pass


class OutOfBranchError(ParameterError):
    pass


class PoleError(ParameterError):
    pass


class NumericDomainError(SqueezeLabError, ArithmeticError):
    pass


class CutoffInadequateError(NumericDomainError):
    pass


class SeriesDivergenceError(NumericDomainError):
    pass


class PrecisionError(NumericDomainError):
    pass


class TransformMismatchError(NumericDomainError):
    pass
