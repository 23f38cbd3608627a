"""Exception types shared across the package."""


class JtapproxError(Exception):
    """Base class for all package errors."""


class ParseError(JtapproxError, ValueError):
    """Malformed input file; message names the offending line."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DomainError(JtapproxError, ValueError):
    """An operation was called with arguments outside its contract."""


class BudgetExceededError(JtapproxError):
    """An exact oracle refused an input larger than its size cap."""


class InvariantError(JtapproxError, RuntimeError):
    """An internal re-verification failed; indicates a bug, not bad input."""
