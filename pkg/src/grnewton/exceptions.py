"""Exception hierarchy shared across the package."""


class GRNewtonError(Exception):
    """Base class for all grnewton errors."""


class InvalidInputError(GRNewtonError, ValueError):
    """Bad user input: non-finite values, dimension mismatch, bad parameters."""


class NumericError(GRNewtonError, ArithmeticError):
    """Numerical failure: factorization breakdown, overflow, non-convergence."""


class ParseError(GRNewtonError, ValueError):
    """Malformed external file (dataset, manifest, trace)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
