"""Request and response models shared by the HTTP API and the CLI.

The CLI's JSON report and the API's JSON bodies are both rendered from
these models, which is what keeps the two interfaces field-for-field
identical for the same store snapshot. Months serialize as "YYYY-MM"
and instants as RFC 3339 UTC.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel

from .analytics import AnalysisWindow, MonthlyCohortStats, RisingContributor
from .models import Recommendation, format_rfc3339
from .pipeline import AnalysisResult
from .signals import GoalTag, IssueLabelStats


class TrendPointModel(BaseModel):
    month: str
    joined: int
    active: int
    retained: int

    @classmethod
    def from_core(cls, point: MonthlyCohortStats) -> "TrendPointModel":
        return cls(
            month=str(point.month),
            joined=point.joined,
            active=point.active,
            retained=point.retained,
        )


class ActivityTotalsModel(BaseModel):
    commits: int
    issues: int
    prs: int


class RisingContributorModel(BaseModel):
    login: str
    active_months: list[str]
    totals: ActivityTotalsModel
    detected_at: str

    @classmethod
    def from_core(cls, contributor: RisingContributor) -> "RisingContributorModel":
        return cls(
            login=contributor.actor.login,
            active_months=[str(m) for m in sorted(contributor.active_months)],
            totals=ActivityTotalsModel(
                commits=contributor.totals.commits,
                issues=contributor.totals.issues,
                prs=contributor.totals.prs,
            ),
            detected_at=format_rfc3339(contributor.detected_at),
        )


class LabelStatsModel(BaseModel):
    total_issues: int
    open_issues: int
    newcomer_labeled_open: int
    matched_labels: list[str]
    coverage_percent: float

    @classmethod
    def from_core(cls, stats: IssueLabelStats) -> "LabelStatsModel":
        return cls(
            total_issues=stats.total_issues,
            open_issues=stats.open_issues,
            newcomer_labeled_open=stats.newcomer_labeled_open,
            matched_labels=sorted(stats.matched_labels),
            coverage_percent=stats.coverage_percent,
        )


class GoalEvidenceModel(BaseModel):
    source: str
    matched_term: str


class GoalTagModel(BaseModel):
    category: str
    evidence: list[GoalEvidenceModel]

    @classmethod
    def from_core(cls, tag: GoalTag) -> "GoalTagModel":
        return cls(
            category=tag.category,
            evidence=[
                GoalEvidenceModel(source=e.source.value, matched_term=e.matched_term)
                for e in tag.evidence
            ],
        )


class RecommendationModel(BaseModel):
    id: str
    kind: str
    target: str
    rationale: dict[str, Any]
    state: str
    snooze_until: Optional[str] = None
    created_at: str
    updated_at: str

    @classmethod
    def from_core(cls, rec: Recommendation) -> "RecommendationModel":
        return cls(
            id=rec.id,
            kind=rec.kind.value,
            target=rec.target,
            rationale=rec.rationale,
            state=rec.state.value,
            snooze_until=format_rfc3339(rec.snooze_until) if rec.snooze_until else None,
            created_at=format_rfc3339(rec.created_at),
            updated_at=format_rfc3339(rec.updated_at),
        )


class WindowModel(BaseModel):
    as_of: str
    months: list[str]

    @classmethod
    def from_core(cls, window: AnalysisWindow) -> "WindowModel":
        return cls(
            as_of=format_rfc3339(window.as_of),
            months=[str(m) for m in window.months],
        )


class AnalysisReportModel(BaseModel):
    """The full analyze report; recommendations are the pending ones."""

    repo: str
    window: Optional[WindowModel]
    trends: list[TrendPointModel]
    rising: list[RisingContributorModel]
    labels: LabelStatsModel
    goals: list[GoalTagModel]
    recommendations: list[RecommendationModel]

    @classmethod
    def from_result(cls, result: AnalysisResult) -> "AnalysisReportModel":
        return cls(
            repo=result.repo.slug,
            window=WindowModel.from_core(result.window) if result.window else None,
            trends=[TrendPointModel.from_core(p) for p in result.trends],
            rising=[RisingContributorModel.from_core(r) for r in result.rising],
            labels=LabelStatsModel.from_core(result.label_stats),
            goals=[GoalTagModel.from_core(t) for t in result.goal_tags],
            recommendations=[RecommendationModel.from_core(r) for r in result.pending],
        )


class ActionRequest(BaseModel):
    action: str
    until: Optional[str] = None


class IngestRequest(BaseModel):
    source: Literal["api", "fixture"]
    path: Optional[str] = None


class IngestReportModel(BaseModel):
    events_new: int
    newcomers: int
    rising: int
    recommendations_pending: int

    @classmethod
    def from_run(cls, events_new: int, result: AnalysisResult) -> "IngestReportModel":
        return cls(
            events_new=events_new,
            newcomers=len(result.newcomers),
            rising=len(result.rising),
            recommendations_pending=len(result.pending),
        )


class ApiErrorModel(BaseModel):
    status: int
    code: str
    message: str
