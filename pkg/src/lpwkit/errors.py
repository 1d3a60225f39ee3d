"""Exception hierarchy shared by all modules.

The CLI maps each class to an exit code, so the split between "the input is
bad" and "the construction broke" matters.
"""

from __future__ import annotations

from typing import Any


class LpwError(Exception):
    """Base class for every error raised by this package."""


class MalformedInputError(LpwError, ValueError):
    """Input objects are structurally broken (ids out of range, missing data)."""


class PreconditionError(LpwError, ValueError):
    """Input is well formed but violates an operation's precondition."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class BudgetExceededError(LpwError):
    """An exact oracle was asked for more than its budget allows."""


class InternalAssertionError(LpwError, AssertionError):
    """A constructive step produced something its own checks reject.

    ``instance`` carries enough data (as plain JSON-able values) to replay the
    failing input.
    """

    def __init__(self, message: str, instance: dict | None = None):
        super().__init__(message)
        self.instance = instance or {}
