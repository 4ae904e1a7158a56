"""Exception types shared across the package."""


class EqColError(Exception):
    """Base class for errors raised by this package."""


class DomainError(EqColError, ValueError):
    """An argument violates the mathematical precondition of an operation."""


class SizeGuardError(EqColError):
    """Refusal to run an exhaustive routine on an instance that is too large."""


class InfeasibleConfigError(EqColError):
    """Bounds or configuration admit no feasible model."""


class DimacsParseError(EqColError, ValueError):
    """Malformed DIMACS input; ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)
