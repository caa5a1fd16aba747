"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a structural invariant (hermiticity, trace, spectrum)."""


class DomainError(ValueError):
    """A scalar function was evaluated outside its domain on some eigenvalue."""


class PreconditionError(ValueError):
    """Input is structurally valid but outside an operation's admissible range."""


class NumericError(ArithmeticError):
    """A computation produced non-finite or non-integral intermediate values."""


class InfeasibilityError(RuntimeError):
    """No state satisfies the requested constraints."""


class TruncationError(RuntimeError):
    """A truncated series did not reach its tail tolerance within resource limits."""


class EmptyWindowError(ValueError):
    """No scan points fall inside the requested cost window."""
