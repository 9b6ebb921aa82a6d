"""Shared exception hierarchy.

Every error raised by this package derives from :class:`ApiRevError` so
callers (and the CLI) can catch domain failures with one handler.
"""

from __future__ import annotations


class ApiRevError(Exception):
    """Base class for all errors raised by apirev."""


class ApiSyntaxError(ApiRevError):
    """Definition text violates the grammar."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.expected = expected


class InvalidBoundError(ApiSyntaxError):
    """A length bound literal is zero (bounds must be >= 1)."""
