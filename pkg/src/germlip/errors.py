"""Exception types shared across the package."""


class GermlipError(Exception):
    """Base class for every error raised by this package."""


class ParseError(GermlipError):
    """Syntax error in an input file, with 1-based position information."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(GermlipError):
    """Input is well-formed but violates a semantic precondition."""


class FiniteDeterminacyError(ValidationError):
    """A necessary condition for finite determinacy fails (cross-cap line,
    triple line, or degenerate divided difference)."""


class TruncationError(GermlipError):
    """A series operation cannot determine its result at the current
    truncation order.  `required_order` says what would suffice."""

    def __init__(self, message, required_order):
        super().__init__(f"{message}; required truncation order: {required_order}")
        self.required_order = required_order


class ComplexTooLargeError(GermlipError):
    """canonical_form refuses complexes above its size limit; callers fall
    back to pairwise equivalence checking."""
