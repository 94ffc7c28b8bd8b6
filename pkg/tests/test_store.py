import random
import tempfile
from datetime import timedelta
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from community_pulse.errors import InvalidRange
from community_pulse.models import (
    IssueRecord,
    IssueState,
    Recommendation,
    RecommendationKind,
    parse_rfc3339,
)
from community_pulse.store import ContributionStore, store_path_for

from helpers import REPO, make_event, utc


def events_batch(n, start_id=0):
    return [
        make_event(f"e{start_id + i}", "nora", "commit", utc(2021, 3, 1 + i % 27, 8))
        for i in range(n)
    ]


class TestUpsert:
    def test_fresh_events_counted(self, tmp_store):
        assert tmp_store.upsert_events(events_batch(5)) == 5

    def test_reinsert_is_idempotent(self, tmp_store):
        batch = events_batch(5)
        tmp_store.upsert_events(batch)
        assert tmp_store.upsert_events(batch) == 0

    def test_mixed_fresh_and_duplicate(self, tmp_store):
        tmp_store.upsert_events(events_batch(2))
        batch = events_batch(2) + events_batch(3, start_id=10)
        assert tmp_store.upsert_events(batch) == 3

    def test_duplicate_overwrites_silently(self, tmp_store):
        tmp_store.upsert_events([make_event("e1", "nora", "commit", utc(2021, 3, 1))])
        tmp_store.upsert_events([make_event("e1", "tess", "commit", utc(2021, 3, 2))])
        (event,) = tmp_store.events()
        assert event.actor.login == "tess"

    def test_persists_across_instances(self, tmp_path):
        path = tmp_path / "store.ndjson"
        ContributionStore(path).upsert_events(events_batch(4))
        assert len(ContributionStore(path).events()) == 4


class TestQueryWindow:
    def test_full_window_returns_everything(self, tmp_store):
        batch = events_batch(6)
        tmp_store.upsert_events(batch)
        out = tmp_store.query_window(utc(2020, 1, 1), utc(2022, 1, 1))
        assert len(out) == 6

    def test_empty_window_between_events(self, tmp_store):
        tmp_store.upsert_events(
            [
                make_event("e1", "nora", "commit", utc(2021, 1, 1)),
                make_event("e2", "nora", "commit", utc(2021, 3, 1)),
            ]
        )
        assert tmp_store.query_window(utc(2021, 2, 1), utc(2021, 2, 28)) == []

    def test_boundaries_inclusive(self, tmp_store):
        edge = make_event("edge", "nora", "commit", utc(2021, 3, 15, 12))
        tmp_store.upsert_events([edge])
        assert tmp_store.query_window(utc(2021, 1, 1), utc(2021, 3, 15, 12)) == [edge]
        assert tmp_store.query_window(utc(2021, 3, 15, 12), utc(2021, 4, 1)) == [edge]

    def test_inverted_range_rejected(self, tmp_store):
        with pytest.raises(InvalidRange):
            tmp_store.query_window(utc(2021, 2, 1), utc(2021, 1, 1))

    def test_linear_scan_oracle(self, tmp_store):
        rng = random.Random(7)
        batch = [
            make_event(f"e{i}", "nora", "commit", utc(2021, rng.randint(1, 12), rng.randint(1, 28)))
            for i in range(40)
        ]
        tmp_store.upsert_events(batch)
        start, end = utc(2021, 3, 10), utc(2021, 9, 20)
        expected = sorted(
            (e for e in batch if start <= e.timestamp <= end),
            key=lambda e: (e.timestamp, e.event_id),
        )
        assert tmp_store.query_window(start, end) == expected

    def test_adjacent_partitions_cover_whole_range(self, tmp_store):
        batch = events_batch(10)
        tmp_store.upsert_events(batch)
        split = utc(2021, 3, 9)
        left = tmp_store.query_window(utc(2021, 1, 1), split)
        right = tmp_store.query_window(split + timedelta(microseconds=1), utc(2022, 1, 1))
        whole = tmp_store.query_window(utc(2021, 1, 1), utc(2022, 1, 1))
        assert left + right == whole


class TestSnapshotDeterminism:
    @settings(max_examples=25, deadline=None)
    @given(st.permutations(list(range(8))))
    def test_upsert_order_irrelevant(self, order):
        batch = events_batch(8)
        with tempfile.TemporaryDirectory() as tmp:
            baseline = ContributionStore(Path(tmp) / "a.ndjson")
            baseline.upsert_events(batch)
            shuffled = ContributionStore(Path(tmp) / "b.ndjson")
            shuffled.upsert_events([batch[i] for i in order])
            assert (Path(tmp) / "a.ndjson").read_bytes() == (Path(tmp) / "b.ndjson").read_bytes()


class TestIssuesAndRecommendations:
    def test_issue_upserts_counted(self, tmp_store):
        issue = IssueRecord(
            issue_id="i1",
            state=IssueState.OPEN,
            labels=["bug"],
            created_at=parse_rfc3339("2021-01-01T00:00:00Z"),
        )
        assert tmp_store.upsert_issues([issue]) == 1
        assert tmp_store.upsert_issues([issue]) == 0

    def test_recommendations_round_trip(self, tmp_path):
        path = tmp_path / "store.ndjson"
        store = ContributionStore(path)
        rec = Recommendation(
            id="abc123",
            kind=RecommendationKind.RISING_CONTRIBUTOR_BADGE,
            target="nora",
            rationale={"active_months": ["2021-02"]},
            created_at=utc(2021, 6, 15),
            updated_at=utc(2021, 6, 15),
        )
        store.upsert_recommendations([rec])
        reloaded = ContributionStore(path)
        assert reloaded.recommendations() == [rec]

    def test_as_of_watermark(self, tmp_store):
        assert tmp_store.as_of is None
        tmp_store.upsert_events([make_event("e1", "nora", "commit", utc(2021, 5, 2))])
        tmp_store.upsert_issues(
            [
                IssueRecord(
                    issue_id="i1",
                    state=IssueState.OPEN,
                    created_at=utc(2021, 6, 1),
                )
            ]
        )
        assert tmp_store.as_of == utc(2021, 6, 1)


def test_default_store_path(repo):
    assert str(store_path_for(repo)).endswith(".community-pulse/acme__solar.ndjson")
