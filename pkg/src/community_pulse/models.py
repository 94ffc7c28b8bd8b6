"""Core domain types: calendar months, actors, events, issues, recommendations.

Everything here is timezone-aware UTC. Record types are frozen pydantic
models so they can live in sets and dict keys; lifecycle changes produce
new instances.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Iterable, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

_LABEL_SEPARATORS = re.compile(r"[\s_\-]+")


def normalize_login(raw: str) -> str:
    """Lowercase and trim a platform login."""
    return raw.strip().lower()


def normalize_label(raw: str) -> str:
    """Canonicalize an issue label.

    Lowercases, trims, and collapses runs of spaces, underscores, and
    hyphens into a single hyphen, so "Good First Issue " and
    "good_first-issue" both become "good-first-issue".
    """
    return _LABEL_SEPARATORS.sub("-", raw.strip().lower()).strip("-")


def parse_rfc3339(text: str) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime."""
    cleaned = text.strip()
    if cleaned.endswith(("Z", "z")):
        cleaned = cleaned[:-1] + "+00:00"
    parsed = datetime.fromisoformat(cleaned)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def format_rfc3339(instant: datetime) -> str:
    """Render an instant as RFC 3339 UTC with a Z suffix."""
    if instant.tzinfo is None:
        instant = instant.replace(tzinfo=timezone.utc)
    return instant.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def shift_months(instant: datetime, months: int) -> datetime:
    """Shift an instant by whole calendar months, clamping the day."""
    index = instant.year * 12 + (instant.month - 1) + months
    year, month = divmod(index, 12)
    month += 1
    day = min(instant.day, calendar.monthrange(year, month)[1])
    return instant.replace(year=year, month=month, day=day)


@dataclass(frozen=True, order=True)
class Month:
    """A UTC calendar month, ordered chronologically."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    @classmethod
    def parse(cls, text: str) -> "Month":
        year, _, month = text.partition("-")
        return cls(int(year), int(month))

    @classmethod
    def of(cls, instant: datetime) -> "Month":
        """Month containing the instant, evaluated in UTC."""
        if instant.tzinfo is not None:
            instant = instant.astimezone(timezone.utc)
        return cls(instant.year, instant.month)

    def shift(self, months: int) -> "Month":
        index = self.year * 12 + (self.month - 1) + months
        year, month = divmod(index, 12)
        return Month(year, month + 1)


class EventKind(str, Enum):
    COMMIT = "commit"
    ISSUE_OPENED = "issue_opened"
    PR_OPENED = "pr_opened"


class IssueState(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


class RecommendationKind(str, Enum):
    ADD_NEWCOMER_LABEL = "add_newcomer_label"
    ADD_GOAL_BADGE = "add_goal_badge"
    RISING_CONTRIBUTOR_BADGE = "rising_contributor_badge"


class RecommendationState(str, Enum):
    PENDING = "pending"
    ACCEPTED = "accepted"
    DISMISSED = "dismissed"
    SNOOZED = "snoozed"


class RepoRef(BaseModel):
    """A repository handle, rendered as "owner/name"."""

    model_config = ConfigDict(frozen=True)

    owner: str
    name: str

    @field_validator("owner", "name")
    @classmethod
    def _no_whitespace(cls, value: str) -> str:
        if not value:
            raise ValueError("must be nonempty")
        if any(ch.isspace() for ch in value):
            raise ValueError("must not contain whitespace")
        return value

    @classmethod
    def parse(cls, slug: str) -> "RepoRef":
        owner, sep, name = slug.partition("/")
        if not sep or not owner or not name:
            raise ValueError(f"expected owner/name, got {slug!r}")
        return cls(owner=owner, name=name)

    @property
    def slug(self) -> str:
        return f"{self.owner}/{self.name}"

    def __str__(self) -> str:
        return self.slug


class ActorId(BaseModel):
    """A normalized contributor identity.

    The login is always lowercase and trimmed. Logins ending in "[bot]"
    are flagged as bots unconditionally; ingestion additionally applies a
    configurable denylist via :meth:`from_login`.
    """

    model_config = ConfigDict(frozen=True)

    login: str
    is_bot: bool = False

    @field_validator("login")
    @classmethod
    def _normalized(cls, value: str) -> str:
        normalized = normalize_login(value)
        if not normalized:
            raise ValueError("login must be nonempty")
        return normalized

    @model_validator(mode="after")
    def _bot_suffix(self) -> "ActorId":
        if self.login.endswith("[bot]") and not self.is_bot:
            object.__setattr__(self, "is_bot", True)
        return self

    @classmethod
    def from_login(cls, raw_login: str, bot_denylist: Iterable[str] = ()) -> "ActorId":
        login = normalize_login(raw_login)
        is_bot = login.endswith("[bot]") or login in set(bot_denylist)
        return cls(login=login, is_bot=is_bot)


class ContributionEvent(BaseModel):
    """One contribution act: a commit, an opened issue, or an opened PR."""

    model_config = ConfigDict(frozen=True)

    event_id: str
    actor: ActorId
    kind: EventKind
    timestamp: datetime
    repo: RepoRef

    @field_validator("event_id")
    @classmethod
    def _nonempty(cls, value: str) -> str:
        if not value:
            raise ValueError("event_id must be nonempty")
        return value

    @field_validator("timestamp")
    @classmethod
    def _utc(cls, value: datetime) -> datetime:
        if value.tzinfo is None:
            return value.replace(tzinfo=timezone.utc)
        return value.astimezone(timezone.utc)


class IssueRecord(BaseModel):
    """An issue-tracker entry with normalized, deduplicated labels."""

    model_config = ConfigDict(frozen=True)

    issue_id: str
    state: IssueState
    labels: tuple[str, ...] = ()
    created_at: datetime

    @field_validator("labels", mode="before")
    @classmethod
    def _normalize_labels(cls, value: Any) -> tuple[str, ...]:
        if value is None:
            return ()
        normalized = {normalize_label(str(label)) for label in value}
        normalized.discard("")
        return tuple(sorted(normalized))

    @field_validator("created_at")
    @classmethod
    def _utc(cls, value: datetime) -> datetime:
        if value.tzinfo is None:
            return value.replace(tzinfo=timezone.utc)
        return value.astimezone(timezone.utc)


class Recommendation(BaseModel):
    """A suggested maintainer action with lifecycle state.

    The id is a stable hash of (kind, target, window), so regenerating
    over the same snapshot yields the same ids and preserved states.
    snooze_until is present exactly when the state is snoozed.
    """

    id: str
    kind: RecommendationKind
    target: str
    rationale: dict[str, Any]
    state: RecommendationState = RecommendationState.PENDING
    snooze_until: Optional[datetime] = None
    created_at: datetime
    updated_at: datetime

    @field_validator("created_at", "updated_at", "snooze_until")
    @classmethod
    def _utc(cls, value: Optional[datetime]) -> Optional[datetime]:
        if value is None:
            return None
        if value.tzinfo is None:
            return value.replace(tzinfo=timezone.utc)
        return value.astimezone(timezone.utc)

    @model_validator(mode="after")
    def _snooze_consistency(self) -> "Recommendation":
        snoozed = self.state is RecommendationState.SNOOZED
        if snoozed and self.snooze_until is None:
            raise ValueError("snoozed recommendation requires snooze_until")
        if not snoozed and self.snooze_until is not None:
            raise ValueError("snooze_until only allowed while snoozed")
        return self
