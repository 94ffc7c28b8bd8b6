"""Per-repository persistence: events, issues, and recommendation state.

One append-compacted NDJSON file per repository, reusing the fixture
line format plus lines with "type": "recommendation". Loading tolerates
duplicate ids (later lines win); saving rewrites the file compacted and
deterministically ordered via an atomic replace, so readers always see
the last fully committed snapshot.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional

from .errors import InvalidRange, ParseError
from .ingestion import event_to_line, issue_to_line, parse_record
from .models import (
    ContributionEvent,
    IssueRecord,
    Recommendation,
    RecommendationKind,
    RecommendationState,
    RepoRef,
    format_rfc3339,
    parse_rfc3339,
)

DEFAULT_STORE_DIR = Path(".community-pulse")


def store_path_for(repo: RepoRef, root: str | Path = DEFAULT_STORE_DIR) -> Path:
    """Default store file location for a repository."""
    return Path(root) / f"{repo.owner}__{repo.name}.ndjson"


def recommendation_to_line(rec: Recommendation) -> dict:
    return {
        "type": "recommendation",
        "id": rec.id,
        "kind": rec.kind.value,
        "target": rec.target,
        "rationale": rec.rationale,
        "state": rec.state.value,
        "snooze_until": format_rfc3339(rec.snooze_until) if rec.snooze_until else None,
        "created_at": format_rfc3339(rec.created_at),
        "updated_at": format_rfc3339(rec.updated_at),
    }


def recommendation_from_line(obj: dict, line_no: int) -> Recommendation:
    try:
        return Recommendation(
            id=str(obj["id"]),
            kind=RecommendationKind(obj["kind"]),
            target=str(obj["target"]),
            rationale=obj.get("rationale") or {},
            state=RecommendationState(obj["state"]),
            snooze_until=parse_rfc3339(obj["snooze_until"]) if obj.get("snooze_until") else None,
            created_at=parse_rfc3339(obj["created_at"]),
            updated_at=parse_rfc3339(obj["updated_at"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(line_no, f"bad recommendation record: {exc}") from exc


class ContributionStore:
    """Keyed collections of events, issues, and recommendations on disk.

    Single writer, multiple readers: mutations are serialized by an
    internal lock and persisted with write-then-rename.
    """

    def __init__(self, path: str | Path, bot_denylist: Iterable[str] = ()):
        self.path = Path(path)
        self._bot_denylist = frozenset(bot_denylist)
        self._lock = threading.RLock()
        self._events: dict[str, ContributionEvent] = {}
        self._issues: dict[str, IssueRecord] = {}
        self._recommendations: dict[str, Recommendation] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with open(self.path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
                if not isinstance(obj, dict):
                    raise ParseError(line_no, "line is not a JSON object")
                if obj.get("type") == "recommendation":
                    rec = recommendation_from_line(obj, line_no)
                    self._recommendations[rec.id] = rec
                    continue
                record = parse_record(obj, line_no, self._bot_denylist)
                if isinstance(record, ContributionEvent):
                    self._events[record.event_id] = record
                else:
                    self._issues[record.issue_id] = record

    def save(self) -> None:
        """Write the compacted snapshot atomically."""
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, temp_name = tempfile.mkstemp(
                dir=self.path.parent, prefix=self.path.name, suffix=".tmp"
            )
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    for event in self.events():
                        handle.write(json.dumps(event_to_line(event), sort_keys=True) + "\n")
                    for issue in self.issues():
                        handle.write(json.dumps(issue_to_line(issue), sort_keys=True) + "\n")
                    for rec in self.recommendations():
                        handle.write(
                            json.dumps(recommendation_to_line(rec), sort_keys=True) + "\n"
                        )
                os.replace(temp_name, self.path)
            except BaseException:
                if os.path.exists(temp_name):
                    os.unlink(temp_name)
                raise

    # -- writes ------------------------------------------------------------

    def upsert_events(self, events: Iterable[ContributionEvent]) -> int:
        """Merge events into the store; returns how many ids were new."""
        with self._lock:
            new = 0
            for event in events:
                if event.event_id not in self._events:
                    new += 1
                self._events[event.event_id] = event
            self.save()
            return new

    def upsert_issues(self, issues: Iterable[IssueRecord]) -> int:
        with self._lock:
            new = 0
            for issue in issues:
                if issue.issue_id not in self._issues:
                    new += 1
                self._issues[issue.issue_id] = issue
            self.save()
            return new

    def upsert_recommendations(self, recs: Iterable[Recommendation]) -> int:
        with self._lock:
            new = 0
            for rec in recs:
                if rec.id not in self._recommendations:
                    new += 1
                self._recommendations[rec.id] = rec
            self.save()
            return new

    def replace_recommendations(self, recs: Iterable[Recommendation]) -> None:
        """Swap the whole recommendation set (used after regeneration)."""
        with self._lock:
            self._recommendations = {rec.id: rec for rec in recs}
            self.save()

    # -- reads -------------------------------------------------------------

    def events(self) -> list[ContributionEvent]:
        return sorted(self._events.values(), key=lambda e: (e.timestamp, e.event_id))

    def issues(self) -> list[IssueRecord]:
        return sorted(self._issues.values(), key=lambda issue: issue.issue_id)

    def recommendations(self) -> list[Recommendation]:
        return sorted(self._recommendations.values(), key=lambda rec: rec.id)

    def recommendation(self, rec_id: str) -> Optional[Recommendation]:
        return self._recommendations.get(rec_id)

    def query_window(self, start: datetime, end: datetime) -> list[ContributionEvent]:
        """Events with start <= timestamp <= end, ordered by (timestamp, id)."""
        if start > end:
            raise InvalidRange(f"start {start} is after end {end}")
        return [e for e in self.events() if start <= e.timestamp <= end]

    @property
    def as_of(self) -> Optional[datetime]:
        """Ingestion watermark: the latest instant seen in any record."""
        stamps = [e.timestamp for e in self._events.values()]
        stamps.extend(issue.created_at for issue in self._issues.values())
        return max(stamps) if stamps else None

    def __len__(self) -> int:
        return len(self._events)
