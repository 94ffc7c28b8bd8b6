"""Recommendation generation and the accept/dismiss/snooze lifecycle.

State machine: pending -> accepted | dismissed | snoozed, and
snoozed -> pending (on snooze expiry or a manual wake). dismissed and
accepted are terminal; regeneration never resurrects a dismissed item.

Generation is deterministic: ids hash (kind, target, window) and new
items are timestamped with the snapshot watermark rather than the wall
clock, so rerunning the pipeline over an unchanged store is byte-stable.
"""

from __future__ import annotations

import hashlib
from datetime import datetime, timedelta
from enum import Enum
from typing import Collection, Iterable, Sequence

from .analytics import AnalysisWindow, RisingContributor
from .errors import IllegalTransition, InvalidSnooze
from .models import (
    Month,
    Recommendation,
    RecommendationKind,
    RecommendationState,
    normalize_login,
)
from .signals import GoalTag, IssueLabelStats, LabelCatalog

DEFAULT_COVERAGE_THRESHOLD = 10.0
DEFAULT_SNOOZE = timedelta(days=30)

BADGE_MARKER_TEMPLATE = "<!-- community-pulse:badge:{category} -->"
BADGE_IMAGE_TEMPLATE = "https://img.shields.io/badge/goal-{category}-brightgreen"


class RecommendationAction(str, Enum):
    ACCEPT = "accept"
    DISMISS = "dismiss"
    SNOOZE = "snooze"


def window_key(window: AnalysisWindow) -> str:
    return f"{window.start}..{window.end}"


def recommendation_id(kind: RecommendationKind, target: str, window: AnalysisWindow) -> str:
    """Stable id for (kind, target, window)."""
    digest = hashlib.sha256(f"{kind.value}|{target}|{window_key(window)}".encode("utf-8"))
    return digest.hexdigest()[:16]


def badge_marker(category: str) -> str:
    return BADGE_MARKER_TEMPLATE.format(category=category)


def badge_image_url(category: str) -> str:
    return BADGE_IMAGE_TEMPLATE.format(category=category)


def has_goal_badge(readme: str, category: str) -> bool:
    """True when the README already carries the badge for this category.

    Looks for the marker comment or the badge image URL.
    """
    if badge_marker(category) in readme:
        return True
    return f"img.shields.io/badge/goal-{category}" in readme


def _sorted_months(months: Iterable[Month]) -> list[str]:
    return [str(month) for month in sorted(months)]


def generate(
    *,
    window: AnalysisWindow,
    label_stats: IssueLabelStats,
    catalog: LabelCatalog,
    goal_tags: Sequence[GoalTag] = (),
    readme: str = "",
    rising: Sequence[RisingContributor] = (),
    membership: Collection[str] = (),
    existing: Iterable[Recommendation] = (),
    coverage_threshold: float = DEFAULT_COVERAGE_THRESHOLD,
    exclude_members: bool = True,
) -> list[Recommendation]:
    """Derive the recommendation set for one analysis snapshot.

    Emits label suggestions when open-issue coverage is below the
    threshold, goal badges for detected categories not already on the
    README, and rising-contributor badges (optionally skipping team
    members). Items already known keep their state untouched; other
    previously acted-on items are carried over, while stale pending
    items whose evidence disappeared are dropped.
    """
    fresh: list[Recommendation] = []
    stamp = window.as_of

    if label_stats.coverage_percent < coverage_threshold:
        for label in sorted(catalog.labels - label_stats.matched_labels):
            fresh.append(
                Recommendation(
                    id=recommendation_id(RecommendationKind.ADD_NEWCOMER_LABEL, label, window),
                    kind=RecommendationKind.ADD_NEWCOMER_LABEL,
                    target=label,
                    rationale={
                        "coverage_percent": label_stats.coverage_percent,
                        "open_issues": label_stats.open_issues,
                        "newcomer_labeled_open": label_stats.newcomer_labeled_open,
                        "labels_in_use": sorted(label_stats.matched_labels),
                    },
                    created_at=stamp,
                    updated_at=stamp,
                )
            )

    for tag in goal_tags:
        if has_goal_badge(readme, tag.category):
            continue
        fresh.append(
            Recommendation(
                id=recommendation_id(RecommendationKind.ADD_GOAL_BADGE, tag.category, window),
                kind=RecommendationKind.ADD_GOAL_BADGE,
                target=tag.category,
                rationale={
                    "evidence": [
                        {"source": e.source.value, "matched_term": e.matched_term}
                        for e in tag.evidence
                    ],
                    "suggested_badge": badge_image_url(tag.category),
                    "detection": "keyword-based",
                },
                created_at=stamp,
                updated_at=stamp,
            )
        )

    member_logins = {normalize_login(login) for login in membership}
    for contributor in rising:
        if exclude_members and contributor.actor.login in member_logins:
            continue
        fresh.append(
            Recommendation(
                id=recommendation_id(
                    RecommendationKind.RISING_CONTRIBUTOR_BADGE, contributor.actor.login, window
                ),
                kind=RecommendationKind.RISING_CONTRIBUTOR_BADGE,
                target=contributor.actor.login,
                rationale={
                    "active_months": _sorted_months(contributor.active_months),
                    "totals": {
                        "commits": contributor.totals.commits,
                        "issues": contributor.totals.issues,
                        "prs": contributor.totals.prs,
                    },
                    "window": window_key(window),
                },
                created_at=stamp,
                updated_at=stamp,
            )
        )

    known = {rec.id: rec for rec in existing}
    merged: dict[str, Recommendation] = {}
    for rec in fresh:
        merged[rec.id] = known.get(rec.id, rec)
    for rec_id, rec in known.items():
        if rec_id not in merged and rec.state is not RecommendationState.PENDING:
            merged[rec_id] = rec
    return sorted(merged.values(), key=lambda r: (r.kind.value, r.target, r.id))


def apply_action(
    recommendation: Recommendation,
    action: RecommendationAction,
    now: datetime,
    until: datetime | None = None,
) -> Recommendation:
    """Apply an accept/dismiss/snooze action, returning the new record.

    Raises:
        IllegalTransition: when the item is not pending.
        InvalidSnooze: when a snooze date is not after `now`.
    """
    if recommendation.state is not RecommendationState.PENDING:
        raise IllegalTransition(
            f"cannot {action.value} a {recommendation.state.value} recommendation"
        )
    if action is RecommendationAction.ACCEPT:
        update = {"state": RecommendationState.ACCEPTED}
    elif action is RecommendationAction.DISMISS:
        update = {"state": RecommendationState.DISMISSED}
    else:
        if until is None:
            until = now + DEFAULT_SNOOZE
        if until <= now:
            raise InvalidSnooze(f"snooze date {until} is not in the future")
        update = {"state": RecommendationState.SNOOZED, "snooze_until": until}
    update["updated_at"] = now
    return recommendation.model_copy(update=update)


def wake(recommendation: Recommendation, now: datetime) -> Recommendation:
    """Return a snoozed item to pending (manual wake)."""
    if recommendation.state is not RecommendationState.SNOOZED:
        raise IllegalTransition(
            f"cannot wake a {recommendation.state.value} recommendation"
        )
    return recommendation.model_copy(
        update={"state": RecommendationState.PENDING, "snooze_until": None, "updated_at": now}
    )


def wake_expired(
    recommendations: Iterable[Recommendation],
    now: datetime,
) -> tuple[list[Recommendation], int]:
    """Wake every snoozed item whose snooze has expired.

    Returns the full updated list plus how many items were reawakened.
    Idempotent: a second call with the same `now` wakes nothing.
    """
    updated = []
    woken = 0
    for rec in recommendations:
        if rec.state is RecommendationState.SNOOZED and rec.snooze_until is not None and rec.snooze_until <= now:
            updated.append(wake(rec, now))
            woken += 1
        else:
            updated.append(rec)
    return updated, woken


def filter_by_state(
    recommendations: Iterable[Recommendation],
    state: RecommendationState | None,
) -> list[Recommendation]:
    if state is None:
        return list(recommendations)
    return [rec for rec in recommendations if rec.state is state]


__all__ = [
    "RecommendationAction",
    "apply_action",
    "badge_image_url",
    "badge_marker",
    "filter_by_state",
    "generate",
    "has_goal_badge",
    "recommendation_id",
    "wake",
    "wake_expired",
    "window_key",
]
