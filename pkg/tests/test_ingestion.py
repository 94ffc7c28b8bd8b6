import json
from datetime import timezone

import pytest

from community_pulse.errors import ParseError
from community_pulse.ingestion import (
    FixtureSource,
    dedupe_and_sort,
    dump_fixture,
    load_fixture,
)
from community_pulse.models import EventKind, IssueRecord, IssueState, parse_rfc3339

from helpers import REPO, make_event, utc


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def event_line(event_id="e1", actor="nora", kind="commit", timestamp="2021-03-01T00:00:00Z"):
    return json.dumps(
        {
            "type": "event",
            "event_id": event_id,
            "actor": actor,
            "kind": kind,
            "timestamp": timestamp,
            "repo": "acme/solar",
        }
    )


def issue_line(issue_id="i1", state="open", labels=(), created_at="2021-03-01T00:00:00Z"):
    return json.dumps(
        {
            "type": "issue",
            "issue_id": issue_id,
            "state": state,
            "labels": list(labels),
            "created_at": created_at,
        }
    )


class TestLoadFixture:
    def test_three_valid_lines(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(path, [event_line(f"e{i}") for i in range(3)])
        events, issues = load_fixture(path)
        assert len(events) == 3
        assert issues == []

    def test_malformed_line_reports_its_number(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(
            path,
            [event_line("e1"), "{not json", event_line("e2"), event_line("e3")],
        )
        with pytest.raises(ParseError) as excinfo:
            load_fixture(path)
        assert excinfo.value.line_no == 2

    def test_unknown_type_rejected(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(path, ['{"type": "mystery"}'])
        with pytest.raises(ParseError) as excinfo:
            load_fixture(path)
        assert "mystery" in str(excinfo.value)

    def test_missing_field_rejected(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        line = json.loads(event_line())
        del line["timestamp"]
        write_lines(path, [json.dumps(line)])
        with pytest.raises(ParseError) as excinfo:
            load_fixture(path)
        assert "timestamp" in str(excinfo.value)

    def test_bad_kind_rejected(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(path, [event_line(kind="starred")])
        with pytest.raises(ParseError):
            load_fixture(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(path, [event_line("e1"), "", event_line("e2")])
        events, _ = load_fixture(path)
        assert [e.event_id for e in events] == ["e1", "e2"]

    def test_mixed_line_types(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(path, [issue_line(), event_line(), issue_line("i2")])
        events, issues = load_fixture(path)
        assert len(events) == 1
        assert len(issues) == 2

    def test_labels_normalized_on_load(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(path, [issue_line(labels=["Good First Issue "])])
        _, issues = load_fixture(path)
        assert issues[0].labels == ("good-first-issue",)

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_fixture(tmp_path / "absent.ndjson")

    def test_round_trip(self, tmp_path):
        events = [
            make_event("e1", "Nora", "commit", "2021-02-05T08:00:00Z"),
            make_event("e2", "ci[bot]", "pr_opened", "2021-03-01T09:30:00Z"),
        ]
        issues = [
            IssueRecord(
                issue_id="i1",
                state=IssueState.OPEN,
                labels=["Help Wanted"],
                created_at=parse_rfc3339("2021-01-01T00:00:00Z"),
            )
        ]
        path = tmp_path / "fx.ndjson"
        dump_fixture(path, events, issues)
        loaded_events, loaded_issues = load_fixture(path)
        assert loaded_events == events
        assert loaded_issues == issues

    def test_small_fixture_counts(self, small_fixture):
        events, issues = load_fixture(small_fixture)
        assert len(events) == 14
        assert len(issues) == 12


class TestFixtureSource:
    def test_window_filter(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(
            path,
            [
                event_line("old", timestamp="2018-01-01T00:00:00Z"),
                event_line("in1", timestamp="2021-03-01T00:00:00Z"),
                event_line("in2", timestamp="2021-06-15T00:00:00Z"),
            ],
        )
        source = FixtureSource(path)
        events = source.fetch_events(REPO, utc(2021, 6, 20), lookback_months=30)
        assert [e.event_id for e in events] == ["in1", "in2"]

    def test_event_exactly_at_as_of_included(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(path, [event_line("edge", timestamp="2021-06-20T00:00:00Z")])
        source = FixtureSource(path)
        events = source.fetch_events(REPO, utc(2021, 6, 20), lookback_months=6)
        assert [e.event_id for e in events] == ["edge"]

    def test_counts_by_kind(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        lines = [event_line(f"c{i}", kind="commit") for i in range(5)]
        lines += [event_line(f"i{i}", kind="issue_opened") for i in range(2)]
        lines += [event_line("p0", kind="pr_opened")]
        write_lines(path, lines)
        source = FixtureSource(path)
        events = source.fetch_events(REPO, utc(2021, 6, 20), lookback_months=6)
        assert len(events) == 8

    def test_empty_repository(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        path.write_text("", encoding="utf-8")
        source = FixtureSource(path)
        assert source.fetch_events(REPO, utc(2021, 6, 20), 6) == []
        assert source.fetch_issues(REPO) == []
        assert source.default_as_of(REPO) is None

    def test_other_repo_events_excluded(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        other = json.loads(event_line("other"))
        other["repo"] = "someone/else"
        write_lines(path, [event_line("mine"), json.dumps(other)])
        source = FixtureSource(path)
        events = source.fetch_events(REPO, utc(2021, 6, 20), 6)
        assert [e.event_id for e in events] == ["mine"]

    def test_fetch_is_idempotent(self, small_fixture):
        source = FixtureSource(small_fixture)
        as_of = source.default_as_of(REPO)
        first = source.fetch_events(REPO, as_of, 30)
        second = source.fetch_events(REPO, as_of, 30)
        assert first == second

    def test_all_logins_lowercase_and_trimmed(self, tmp_path):
        path = tmp_path / "fx.ndjson"
        write_lines(path, [event_line("e1", actor=" NorA ")])
        source = FixtureSource(path)
        (event,) = source.fetch_events(REPO, utc(2021, 6, 20), 6)
        assert event.actor.login == "nora"

    def test_default_as_of_is_latest_event(self, small_fixture):
        source = FixtureSource(small_fixture)
        as_of = source.default_as_of(REPO)
        assert as_of == utc(2021, 6, 15, 14, 30)
        assert as_of.tzinfo == timezone.utc


class TestDedupeAndSort:
    def test_duplicates_collapse(self):
        first = make_event("e1", "nora", "commit", "2021-02-05T08:00:00Z")
        dup = make_event("e1", "nora", "commit", "2021-02-05T08:00:00Z")
        assert dedupe_and_sort([first, dup]) == [first]

    def test_deterministic_order(self):
        events = [
            make_event("b", "nora", "commit", "2021-02-05T08:00:00Z"),
            make_event("a", "nora", "commit", "2021-02-05T08:00:00Z"),
            make_event("c", "nora", "commit", "2021-01-05T08:00:00Z"),
        ]
        ordered = dedupe_and_sort(events)
        assert [e.event_id for e in ordered] == ["c", "a", "b"]

    def test_kind_enum_values(self):
        assert {k.value for k in EventKind} == {"commit", "issue_opened", "pr_opened"}
