"""Exception types shared across the package."""


class BranchingError(Exception):
    pass


class FormatError(BranchingError, ValueError):
    """Malformed text input. Carries optional line and column positions."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class DomainError(BranchingError, ValueError):
    pass


class UnsupportedError(DomainError):
    pass


class BudgetExceeded(BranchingError, RuntimeError):
    """A search or enumeration would exceed its configured budget."""
