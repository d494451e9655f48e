"""Exception hierarchy shared by all formkit modules."""


class FormkitError(Exception):
    """Base class for every error raised by formkit."""


class SpecError(FormkitError):
    """Malformed problem spec or user input."""


class NumericError(FormkitError):
    """A numeric precondition failed or a result could not be certified."""


class NonFinite(NumericError):
    pass


class NotHermitian(NumericError):
    pass


class NotSymmetric(NotHermitian):
    pass


class NotPSD(NumericError):
    pass


class DimensionMismatch(NumericError):
    pass


class NotInvertible(NumericError):
    def __init__(self, message, sigma_min=None):
        super().__init__(message)
        self.sigma_min = sigma_min


class MetricSingular(NumericError):
    pass


class ConditionGuard(NumericError):
    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class InternalInconsistency(NumericError):
    """Two mathematically equivalent verdicts disagreed numerically."""

    def __init__(self, message, sigma_min_bijection=None, sigma_min_resolvent=None):
        super().__init__(message)
        self.sigma_min_bijection = sigma_min_bijection
        self.sigma_min_resolvent = sigma_min_resolvent


class ResolventViolation(NumericError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class EvalError(NumericError):
    pass


class UnboundVariable(EvalError):
    pass


class DomainError(EvalError):
    pass


class ParseError(SpecError):
    """Syntax error at a byte offset of the source text."""

    def __init__(self, position, expected, found):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {position}: expected {expected}, found {found!r}")


class ContextError(ParseError):
    """A variable that is not allowed in the parsing context."""
