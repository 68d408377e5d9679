"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TempReduceError(Exception):
    """Base class for all package errors."""


class InconsistencyError(TempReduceError):
    """A constraint network admits no model.

    ``triple`` holds one witnessing node triple ``(i, k, j)`` when the
    contradiction was found by composition; ``side`` is filled in by callers
    comparing two graphs (``"reference"`` or ``"candidate"``).
    """

    def __init__(self, message: str, triple: tuple | None = None, side: str | None = None):
        super().__init__(message)
        self.triple = triple
        self.side = side

    def __str__(self) -> str:
        msg = super().__str__()
        if self.side:
            return f"{self.side}: {msg}"
        return msg


class NonConvexError(TempReduceError):
    """A relation outside the convex sub-algebra was supplied."""


class AnnotationParseError(TempReduceError):
    """Malformed input in the native annotation format or in TimeML."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class DegenerateReferenceError(TempReduceError):
    """The reference graph carries no information (zero value)."""


class DegenerateCandidateError(TempReduceError):
    """The candidate graph carries no information (zero value)."""
