"""Newcomer cohort analytics: profiles, trends, and rising contributors.

Definitions used throughout:

* A *newcomer* is an actor whose first-ever contribution falls inside
  the analysis window; any earlier event disqualifies them.
* An actor is *active* in a month when they have at least one event of
  any kind in that UTC calendar month.
* A cohort member is *retained* when they have activity in a later
  month within the same window; nothing past the window is consulted.
* A newcomer is *rising* when active in at least `threshold` distinct
  window months (defaults: 3 of 6).

Everything here is a pure function of its inputs, so identical inputs
yield identical outputs in any canonical serialization.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Collection, Iterable, Sequence

from .errors import InsufficientHistoryWarning
from .models import ActorId, ContributionEvent, EventKind, Month, normalize_login

DEFAULT_WINDOW_MONTHS = 6
DEFAULT_RISING_THRESHOLD = 3


@dataclass(frozen=True)
class ActivityTotals:
    """Per-kind event counts."""

    commits: int = 0
    issues: int = 0
    prs: int = 0

    def __add__(self, other: "ActivityTotals") -> "ActivityTotals":
        return ActivityTotals(
            commits=self.commits + other.commits,
            issues=self.issues + other.issues,
            prs=self.prs + other.prs,
        )

    @property
    def total(self) -> int:
        return self.commits + self.issues + self.prs

    def counting(self, kind: EventKind) -> "ActivityTotals":
        return self + ActivityTotals(
            commits=int(kind is EventKind.COMMIT),
            issues=int(kind is EventKind.ISSUE_OPENED),
            prs=int(kind is EventKind.PR_OPENED),
        )


@dataclass(frozen=True)
class AnalysisWindow:
    """The trailing run of calendar months ending with the as-of month."""

    as_of: datetime
    window_months: int
    months: tuple[Month, ...]

    @classmethod
    def ending_at(cls, as_of: datetime, window_months: int = DEFAULT_WINDOW_MONTHS) -> "AnalysisWindow":
        if window_months < 1:
            raise ValueError("window_months must be positive")
        if as_of.tzinfo is None:
            as_of = as_of.replace(tzinfo=timezone.utc)
        else:
            as_of = as_of.astimezone(timezone.utc)
        last = Month.of(as_of)
        months = tuple(last.shift(offset) for offset in range(1 - window_months, 1))
        return cls(as_of=as_of, window_months=window_months, months=months)

    @property
    def start(self) -> Month:
        return self.months[0]

    @property
    def end(self) -> Month:
        return self.months[-1]

    def __contains__(self, month: Month) -> bool:
        return self.start <= month <= self.end


@dataclass
class ContributorProfile:
    """Per-actor aggregate over all supplied history."""

    actor: ActorId
    first_contribution_month: Month
    monthly_counts: dict[Month, ActivityTotals] = field(default_factory=dict)
    is_team_member: bool = False


@dataclass(frozen=True)
class MonthlyCohortStats:
    """One point of the joining/activity/retention trend."""

    month: Month
    joined: int
    active: int
    retained: int


@dataclass(frozen=True)
class RisingContributor:
    actor: ActorId
    active_months: frozenset[Month]
    totals: ActivityTotals
    detected_at: datetime


def build_profiles(
    events: Iterable[ContributionEvent],
    membership: Collection[str] = (),
) -> list[ContributorProfile]:
    """Aggregate deduplicated events into one profile per non-bot actor.

    Args:
        events: contribution events over all known history.
        membership: team-member logins from configuration.

    Returns:
        Profiles ordered by login. Bot actors are excluded entirely.
    """
    member_logins = {normalize_login(login) for login in membership}
    profiles: dict[ActorId, ContributorProfile] = {}
    for event in events:
        if event.actor.is_bot:
            continue
        month = Month.of(event.timestamp)
        profile = profiles.get(event.actor)
        if profile is None:
            profile = ContributorProfile(
                actor=event.actor,
                first_contribution_month=month,
                is_team_member=event.actor.login in member_logins,
            )
            profiles[event.actor] = profile
        elif month < profile.first_contribution_month:
            profile.first_contribution_month = month
        current = profile.monthly_counts.get(month, ActivityTotals())
        profile.monthly_counts[month] = current.counting(event.kind)
    return sorted(profiles.values(), key=lambda p: p.actor.login)


def detect_newcomers(
    profiles: Sequence[ContributorProfile],
    window: AnalysisWindow,
) -> set[ActorId]:
    """Actors whose first contribution ever falls inside the window.

    Emits :class:`InsufficientHistoryWarning` when no supplied profile
    predates the window start, since quiet veterans would then be
    indistinguishable from newcomers.
    """
    if profiles and not any(p.first_contribution_month < window.start for p in profiles):
        warnings.warn(
            f"no history before {window.start}; newcomer detection may overcount",
            InsufficientHistoryWarning,
            stacklevel=2,
        )
    return {p.actor for p in profiles if p.first_contribution_month in window}


def cohort_trends(
    profiles: Sequence[ContributorProfile],
    newcomers: Collection[ActorId],
    window: AnalysisWindow,
) -> list[MonthlyCohortStats]:
    """Joining, activity, and retention counts per window month.

    joined(t): newcomers whose first contribution month is t.
    active(t): newcomers with any event in t.
    retained(t): month-t joiners with activity in a later window month.
    """
    newcomer_profiles = [p for p in profiles if p.actor in set(newcomers)]
    stats = []
    for month in window.months:
        joined = active = retained = 0
        for profile in newcomer_profiles:
            has_activity = month in profile.monthly_counts
            if has_activity:
                active += 1
            if profile.first_contribution_month == month:
                joined += 1
                if any(
                    later in profile.monthly_counts
                    for later in window.months
                    if later > month
                ):
                    retained += 1
        stats.append(MonthlyCohortStats(month=month, joined=joined, active=active, retained=retained))
    return stats


def rising_contributors(
    profiles: Sequence[ContributorProfile],
    newcomers: Collection[ActorId],
    window: AnalysisWindow,
    threshold: int = DEFAULT_RISING_THRESHOLD,
) -> list[RisingContributor]:
    """Newcomers active in at least `threshold` distinct window months.

    Ordered by number of active months descending, then window event
    totals descending, then login ascending.
    """
    if threshold < 1:
        raise ValueError("threshold must be positive")
    if threshold > window.window_months:
        raise ValueError(
            f"threshold {threshold} exceeds window of {window.window_months} months"
        )
    newcomer_set = set(newcomers)
    rising = []
    for profile in profiles:
        if profile.actor not in newcomer_set or profile.actor.is_bot:
            continue
        active_months = frozenset(m for m in profile.monthly_counts if m in window)
        if len(active_months) < threshold:
            continue
        rising.append(
            RisingContributor(
                actor=profile.actor,
                active_months=active_months,
                totals=activity_summary(profile, window),
                detected_at=window.as_of,
            )
        )
    rising.sort(key=lambda r: (-len(r.active_months), -r.totals.total, r.actor.login))
    return rising


def activity_summary(profile: ContributorProfile, window: AnalysisWindow) -> ActivityTotals:
    """Per-kind totals over window months only."""
    totals = ActivityTotals()
    for month, counts in profile.monthly_counts.items():
        if month in window:
            totals = totals + counts
    return totals


def trends_to_csv(stats: Sequence[MonthlyCohortStats]) -> str:
    """Render the trend series as CSV with a month,joined,active,retained header."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["month", "joined", "active", "retained"])
    for point in stats:
        writer.writerow([str(point.month), point.joined, point.active, point.retained])
    return buffer.getvalue()
