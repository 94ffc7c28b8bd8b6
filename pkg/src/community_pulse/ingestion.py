"""Offline ingestion: line-delimited fixture files and the fixture source.

Fixture files hold one JSON object per line with a required "type"
discriminator:

    {"type": "event", "event_id": ..., "actor": "login",
     "kind": "commit" | "issue_opened" | "pr_opened",
     "timestamp": RFC3339, "repo": "owner/name"}
    {"type": "issue", "issue_id": ..., "state": "open" | "closed",
     "labels": [...], "created_at": RFC3339}

Mixed line types are permitted. Blank lines are skipped; anything else
that does not parse raises :class:`ParseError` with its line number.
"""

from __future__ import annotations

import json
from datetime import datetime
from pathlib import Path
from typing import Iterable, Union

from .errors import ParseError
from .models import (
    ActorId,
    ContributionEvent,
    EventKind,
    IssueRecord,
    IssueState,
    RepoRef,
    format_rfc3339,
    parse_rfc3339,
    shift_months,
)

FixtureRecord = Union[ContributionEvent, IssueRecord]


def event_to_line(event: ContributionEvent) -> dict:
    return {
        "type": "event",
        "event_id": event.event_id,
        "actor": event.actor.login,
        "kind": event.kind.value,
        "timestamp": format_rfc3339(event.timestamp),
        "repo": event.repo.slug,
    }


def issue_to_line(issue: IssueRecord) -> dict:
    return {
        "type": "issue",
        "issue_id": issue.issue_id,
        "state": issue.state.value,
        "labels": list(issue.labels),
        "created_at": format_rfc3339(issue.created_at),
    }


def _require(obj: dict, key: str, line_no: int) -> object:
    if key not in obj:
        raise ParseError(line_no, f"missing field {key!r}")
    return obj[key]


def parse_record(obj: dict, line_no: int, bot_denylist: Iterable[str] = ()) -> FixtureRecord:
    """Turn one decoded fixture line into a domain record."""
    record_type = _require(obj, "type", line_no)
    try:
        if record_type == "event":
            return ContributionEvent(
                event_id=str(_require(obj, "event_id", line_no)),
                actor=ActorId.from_login(str(_require(obj, "actor", line_no)), bot_denylist),
                kind=EventKind(_require(obj, "kind", line_no)),
                timestamp=parse_rfc3339(str(_require(obj, "timestamp", line_no))),
                repo=RepoRef.parse(str(_require(obj, "repo", line_no))),
            )
        if record_type == "issue":
            return IssueRecord(
                issue_id=str(_require(obj, "issue_id", line_no)),
                state=IssueState(_require(obj, "state", line_no)),
                labels=_require(obj, "labels", line_no),
                created_at=parse_rfc3339(str(_require(obj, "created_at", line_no))),
            )
    except ParseError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(line_no, str(exc)) from exc
    raise ParseError(line_no, f"unknown record type {record_type!r}")


def load_fixture(
    path: str | Path,
    bot_denylist: Iterable[str] = (),
) -> tuple[list[ContributionEvent], list[IssueRecord]]:
    """Parse a fixture file into event and issue lists, in file order.

    Raises:
        ParseError: on the first malformed line, naming its line number.
        OSError: when the file cannot be read.
    """
    denylist = frozenset(bot_denylist)
    events: list[ContributionEvent] = []
    issues: list[IssueRecord] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ParseError(line_no, "line is not a JSON object")
            record = parse_record(obj, line_no, denylist)
            if isinstance(record, ContributionEvent):
                events.append(record)
            else:
                issues.append(record)
    return events, issues


def dump_fixture(
    path: str | Path,
    events: Iterable[ContributionEvent] = (),
    issues: Iterable[IssueRecord] = (),
) -> None:
    """Write records in the fixture line format, events first."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for event in events:
            handle.write(json.dumps(event_to_line(event), sort_keys=True) + "\n")
        for issue in issues:
            handle.write(json.dumps(issue_to_line(issue), sort_keys=True) + "\n")


def dedupe_and_sort(events: Iterable[ContributionEvent]) -> list[ContributionEvent]:
    """Deduplicate by event_id and order by (timestamp, event_id).

    Later duplicates win, matching upsert semantics elsewhere.
    """
    by_id = {event.event_id: event for event in events}
    return sorted(by_id.values(), key=lambda e: (e.timestamp, e.event_id))


class FixtureSource:
    """Event and issue source backed by a recorded fixture file.

    Fetches are pure replays: identical inputs yield identical outputs.
    """

    def __init__(self, path: str | Path, bot_denylist: Iterable[str] = ()):
        self.path = Path(path)
        self._events, self._issues = load_fixture(self.path, bot_denylist)

    def default_as_of(self, repo: RepoRef) -> datetime | None:
        """Natural watermark of the recording: its latest event instant."""
        stamps = [e.timestamp for e in self._events if e.repo == repo]
        return max(stamps) if stamps else None

    def fetch_events(
        self,
        repo: RepoRef,
        as_of: datetime,
        lookback_months: int,
    ) -> list[ContributionEvent]:
        """Replay events for the repo within [as_of - lookback, as_of]."""
        if lookback_months < 1:
            raise ValueError("lookback_months must be positive")
        start = shift_months(as_of, -lookback_months)
        selected = [
            event
            for event in self._events
            if event.repo == repo and start <= event.timestamp <= as_of
        ]
        return dedupe_and_sort(selected)

    def fetch_issues(self, repo: RepoRef) -> list[IssueRecord]:
        del repo  # fixture files are recorded per repository
        return sorted(self._issues, key=lambda issue: issue.issue_id)

    def fetch_project_metadata(self, repo: RepoRef):
        """Fixtures carry no README/description/topics."""
        del repo
        return None
