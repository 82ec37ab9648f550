class KoszulresError(Exception):
    """Base class of every error raised by the engine."""


class RingInputError(KoszulresError, ValueError):
    """Malformed ring definition, polynomial or generator."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        self.reason = message
        if line is not None and column is not None:
            message = f'line {line}, column {column}: {message}'
        elif column is not None:
            message = f'column {column}: {message}'
        elif line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)


class CutoffError(KoszulresError):
    """A computation needs graded pieces beyond the computed cutoff degree."""


class DimensionMismatchError(KoszulresError, ValueError):
    pass


class NotACycleError(KoszulresError):
    pass


class NotABoundaryError(KoszulresError):
    pass


class ProductsNotZeroError(KoszulresError):
    """The products [x][y] or [y][z] of a Massey triple do not vanish."""


class ConsistencyError(KoszulresError):
    """An identity that holds by construction failed; the certificate is broken."""
