"""Shared exception types."""

from __future__ import annotations


class AddformsError(Exception):
    """Base class for all library errors."""


class GroupMismatchError(AddformsError, ValueError):
    """Operands live in different groups."""


class CapExceeded(AddformsError, RuntimeError):
    """A group-order or work budget was exceeded.

    Raised instead of silently degrading; callers can retry with a larger
    budget or switch to Monte Carlo estimation where available.
    """


class ParseError(AddformsError, ValueError):
    """Syntax or semantic error in a text input, with position info."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
