"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ParseError -> 2, DomainError and its
subclasses -> 1, InternalInvariantError -> 3.
"""


class QuivdiffError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(QuivdiffError):
    """Malformed input text or JSON."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


class DomainError(QuivdiffError):
    """Structurally valid input that an operation cannot accept."""


class SingularMatrixError(DomainError):
    """Inversion of a non-invertible matrix."""


class MismatchError(DomainError):
    """Operands live over different quivers or different fields."""


class EmptyQuiverError(DomainError):
    """Operation requires at least one vertex."""


class NotAModuleError(DomainError):
    """Raw data where some length-two path acts by a nonzero map."""


class NotADifferentialError(DomainError):
    """Raw endomorphism with D*D != 0, or D not commuting with the action."""


class NotProjectiveError(DomainError):
    """Raw module failing the projective-cover dimension test."""

    def __init__(self, vertex, message):
        self.vertex = vertex
        super().__init__(message)


class NotReducedError(DomainError):
    """Operation defined only for modules with zero top differential."""


class NotDifferentialMapError(DomainError):
    """Module map that fails to commute with the differentials."""


class NotAcyclicError(DomainError):
    """Operation requires an acyclic quiver."""


class ValidationFailedError(DomainError):
    """Carries the violation list produced by diffproj.validate."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid differential module: {lines}")


class InternalInvariantError(QuivdiffError):
    """A cross-check that can only fail on an implementation bug."""
