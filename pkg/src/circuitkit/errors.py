"""Exception types shared across the package."""

from __future__ import annotations


class GraphFormatError(ValueError):
    """Malformed graph file. Carries the 1-based line number of the offense."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmbeddingError(ValueError):
    """A rotation system whose face count violates the planar Euler relation."""


class NotEulerianError(ValueError):
    """Operation requires equal in/out degrees (directed) or even degrees (undirected)."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class GuardExceededError(RuntimeError):
    """A computation was refused because its size bound exceeds the configured guard."""

    def __init__(self, message: str, required: int, limit: int):
        self.required = required
        self.limit = limit
        super().__init__(f"{message}: requires {required}, guard is {limit}")
