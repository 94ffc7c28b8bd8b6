"""Exception and warning types shared across the package."""

from __future__ import annotations


class CommunityPulseError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(CommunityPulseError):
    """A data source could not be read."""


class AuthError(IngestionError):
    """The API credential is missing or was rejected."""


class RateLimited(IngestionError):
    """The upstream API rate limit was hit and retries were exhausted.

    Attributes:
        retry_after: Seconds the caller should wait before retrying, when
            the upstream reported one.
    """

    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class NotFound(CommunityPulseError):
    """A repository, project, or recommendation does not exist."""


class ParseError(IngestionError):
    """A fixture or store line could not be parsed.

    Attributes:
        line_no: 1-based line number of the offending line.
        reason: Human-readable description of the problem.
    """

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class InvalidRange(CommunityPulseError):
    """A time range query was given with start after end."""


class IllegalTransition(CommunityPulseError):
    """A recommendation action is not allowed from its current state."""


class InvalidSnooze(CommunityPulseError):
    """A snooze date is missing, unparseable, or not in the future."""


class InsufficientHistoryWarning(UserWarning):
    """Newcomer detection ran on history that does not predate the window.

    Without events before the window start, actors who joined earlier but
    were quiet cannot be told apart from genuine newcomers.
    """
