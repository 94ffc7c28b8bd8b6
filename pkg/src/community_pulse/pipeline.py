"""Composition of ingestion, analytics, signals, and generation.

Both the CLI and the HTTP service run through these functions so that
every number they report comes from the same computation over the same
store snapshot.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Optional, Protocol, Sequence

from .analytics import (
    DEFAULT_RISING_THRESHOLD,
    DEFAULT_WINDOW_MONTHS,
    AnalysisWindow,
    MonthlyCohortStats,
    RisingContributor,
    build_profiles,
    cohort_trends,
    detect_newcomers,
    rising_contributors,
)
from .errors import IngestionError, NotFound
from .models import ActorId, ContributionEvent, IssueRecord, Recommendation, RecommendationState, RepoRef
from .recommendations import RecommendationAction, apply_action, generate, wake_expired
from .signals import (
    GoalTag,
    IssueLabelStats,
    LabelCatalog,
    default_catalog,
    default_taxonomy,
    detect_goal_tags,
    label_coverage,
)
from .store import ContributionStore

logger = logging.getLogger(__name__)

HISTORY_MARGIN_MONTHS = 24
FULL_HISTORY_MONTHS = 1200


class EventSource(Protocol):
    """Anything able to supply events, issues, and project metadata."""

    def default_as_of(self, repo: RepoRef) -> Optional[datetime]: ...

    def fetch_events(
        self, repo: RepoRef, as_of: datetime, lookback_months: int
    ) -> list[ContributionEvent]: ...

    def fetch_issues(self, repo: RepoRef) -> list[IssueRecord]: ...

    def fetch_project_metadata(self, repo: RepoRef): ...


@dataclass
class PipelineConfig:
    """Tunable parameters, defaulting to the 3-of-6 rule."""

    window_months: int = DEFAULT_WINDOW_MONTHS
    threshold: int = DEFAULT_RISING_THRESHOLD
    coverage_threshold: float = 10.0
    exclude_members: bool = True
    membership: frozenset[str] = frozenset()
    bot_denylist: frozenset[str] = frozenset()
    lookback_months: Optional[int] = None
    full_history: bool = False
    catalog: LabelCatalog = field(default_factory=default_catalog)
    taxonomy: dict = field(default_factory=default_taxonomy)

    @property
    def effective_lookback(self) -> int:
        if self.full_history:
            return FULL_HISTORY_MONTHS
        if self.lookback_months is not None:
            return self.lookback_months
        return self.window_months + HISTORY_MARGIN_MONTHS


@dataclass
class IngestOutcome:
    """What one ingestion run acquired, and what went wrong."""

    events_new: int = 0
    issues_new: int = 0
    metadata: object = None
    errors: list[str] = field(default_factory=list)

    @property
    def acquired_anything(self) -> bool:
        return self.events_new > 0 or self.issues_new > 0 or not self.errors


@dataclass
class AnalysisResult:
    """Everything the reports surface for one snapshot."""

    repo: RepoRef
    window: Optional[AnalysisWindow]
    trends: list[MonthlyCohortStats]
    newcomers: set[ActorId]
    rising_all: list[RisingContributor]
    rising: list[RisingContributor]
    label_stats: IssueLabelStats
    goal_tags: list[GoalTag]
    recommendations: list[Recommendation]

    @property
    def pending(self) -> list[Recommendation]:
        return [r for r in self.recommendations if r.state is RecommendationState.PENDING]


def run_ingestion(
    store: ContributionStore,
    source: EventSource,
    repo: RepoRef,
    config: PipelineConfig,
    as_of: Optional[datetime] = None,
) -> IngestOutcome:
    """Pull events, issues, and metadata from a source into the store.

    Endpoint failures are collected rather than raised so a partially
    successful run still lands what it acquired; callers decide whether
    partial results are acceptable.
    """
    outcome = IngestOutcome()
    if as_of is None:
        as_of = source.default_as_of(repo)
    if as_of is None:
        logger.info("source has no data for %s; nothing to ingest", repo.slug)
        return outcome
    try:
        events = source.fetch_events(repo, as_of, config.effective_lookback)
        outcome.events_new = store.upsert_events(events)
    except IngestionError as exc:
        outcome.errors.append(f"events: {exc}")
    try:
        issues = source.fetch_issues(repo)
        outcome.issues_new = store.upsert_issues(issues)
    except IngestionError as exc:
        outcome.errors.append(f"issues: {exc}")
    try:
        outcome.metadata = source.fetch_project_metadata(repo)
    except IngestionError as exc:
        outcome.errors.append(f"metadata: {exc}")
    return outcome


def analyze_store(
    store: ContributionStore,
    repo: RepoRef,
    config: PipelineConfig,
    metadata: object = None,
) -> AnalysisResult:
    """Compute analytics, signals, and the merged recommendation set.

    Pure with respect to the store: nothing is written. The analysis
    window ends at the store watermark, so replaying a recorded fixture
    reproduces its original trends regardless of when it is analyzed.
    """
    events = store.events()
    issues = store.issues()
    stats = label_coverage(issues, config.catalog)

    readme = getattr(metadata, "readme", "") or ""
    description = getattr(metadata, "description", "") or ""
    topics = list(getattr(metadata, "topics", ()) or ())
    goal_tags = detect_goal_tags(readme, description, topics, config.taxonomy)

    as_of = store.as_of
    if as_of is None:
        return AnalysisResult(
            repo=repo,
            window=None,
            trends=[],
            newcomers=set(),
            rising_all=[],
            rising=[],
            label_stats=stats,
            goal_tags=goal_tags,
            recommendations=store.recommendations(),
        )

    window = AnalysisWindow.ending_at(as_of, config.window_months)
    profiles = build_profiles(events, config.membership)
    newcomers = detect_newcomers(profiles, window)
    trends = cohort_trends(profiles, newcomers, window)
    rising_all = rising_contributors(profiles, newcomers, window, config.threshold)
    member_logins = set(config.membership)
    rising = (
        [r for r in rising_all if r.actor.login not in member_logins]
        if config.exclude_members
        else list(rising_all)
    )

    recommendations = generate(
        window=window,
        label_stats=stats,
        catalog=config.catalog,
        goal_tags=goal_tags,
        readme=readme,
        rising=rising_all,
        membership=config.membership,
        existing=store.recommendations(),
        coverage_threshold=config.coverage_threshold,
        exclude_members=config.exclude_members,
    )

    return AnalysisResult(
        repo=repo,
        window=window,
        trends=trends,
        newcomers=newcomers,
        rising_all=rising_all,
        rising=rising,
        label_stats=stats,
        goal_tags=goal_tags,
        recommendations=recommendations,
    )


def ingest_and_analyze(
    store: ContributionStore,
    source: EventSource,
    repo: RepoRef,
    config: PipelineConfig,
    as_of: Optional[datetime] = None,
) -> tuple[IngestOutcome, AnalysisResult]:
    """Full run: acquire, analyze, and persist the recommendation merge."""
    outcome = run_ingestion(store, source, repo, config, as_of=as_of)
    result = analyze_store(store, repo, config, metadata=outcome.metadata)
    store.replace_recommendations(result.recommendations)
    return outcome, result


def refresh_recommendations(
    store: ContributionStore,
    repo: RepoRef,
    config: PipelineConfig,
) -> AnalysisResult:
    """Re-analyze an existing store and persist the regenerated merge."""
    result = analyze_store(store, repo, config)
    store.replace_recommendations(result.recommendations)
    return result


def act_on_recommendation(
    store: ContributionStore,
    rec_id: str,
    action: RecommendationAction,
    now: datetime,
    until: Optional[datetime] = None,
) -> Recommendation:
    """Apply a lifecycle action to a stored recommendation and persist."""
    current = store.recommendation(rec_id)
    if current is None:
        raise NotFound(f"no recommendation with id {rec_id!r}")
    updated = apply_action(current, action, now, until)
    store.upsert_recommendations([updated])
    return updated


def wake_expired_in_store(store: ContributionStore, now: datetime) -> int:
    """Return expired snoozes to pending; returns how many woke."""
    updated, woken = wake_expired(store.recommendations(), now)
    if woken:
        store.replace_recommendations(updated)
    return woken


def load_membership(path: str | Path) -> frozenset[str]:
    """Read team-member logins, one per line; "#" starts a comment."""
    logins = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            logins.add(line.lower())
    return frozenset(logins)


def canonical_json(payload: object) -> str:
    """Canonical serialization used for byte-level determinism checks."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def trend_rows(trends: Sequence[MonthlyCohortStats]) -> list[dict]:
    return [
        {
            "month": str(point.month),
            "joined": point.joined,
            "active": point.active,
            "retained": point.retained,
        }
        for point in trends
    ]
