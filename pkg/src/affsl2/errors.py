"""Exception hierarchy shared by all modules.

Every error carries a stable ``code`` string so the command-line front end
can map failures to machine-readable reports without string matching.
"""


class DomainError(Exception):
    """Base class for all library errors."""

    code = "DOMAIN_ERROR"


class InvalidContextError(DomainError):
    code = "INVALID_CONTEXT"


class ContextMismatchError(DomainError):
    code = "CONTEXT_MISMATCH"


class ZeroVectorError(DomainError):
    code = "ZERO_VECTOR"


class NotIntegralError(DomainError):
    code = "NOT_INTEGRAL"


class NotReducibleError(DomainError):
    code = "NOT_REDUCIBLE"


class NonNilpotentError(DomainError):
    code = "NON_NILPOTENT"


class HypothesisError(DomainError):
    code = "HYPOTHESIS_FAIL"


class ReductionStuckError(DomainError):
    code = "STUCK"


class ElementSyntaxError(DomainError):
    """Raised by the expression parser; ``position`` is a 0-based offset."""

    code = "SYNTAX_ERROR"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ElementIndexError(DomainError):
    """Raised for illegal variable indices such as y[0]."""

    code = "INDEX_ERROR"
