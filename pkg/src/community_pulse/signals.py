"""Attract-side signals: newcomer-label coverage and social-good goal tags.

The shipped label catalog snapshots community-curated beginner label
lists; the goal taxonomy is a keyword proxy for social-good project
categories. Both are plain data files a deployment can replace, and
reports should present goal tags as keyword-based, not classified.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .models import IssueRecord, IssueState, normalize_label

REQUIRED_CATALOG_LABELS = frozenset({"good-first-issue", "first-timers-only"})


@dataclass(frozen=True)
class LabelCatalog:
    """A set of normalized newcomer-friendly labels to match against."""

    labels: frozenset[str]
    source_note: str = ""

    def __post_init__(self):
        if not self.labels:
            raise ValueError("label catalog must be nonempty")
        missing = REQUIRED_CATALOG_LABELS - self.labels
        if missing:
            raise ValueError(f"catalog is missing required labels: {sorted(missing)}")
        denormalized = {label for label in self.labels if label != normalize_label(label)}
        if denormalized:
            raise ValueError(f"catalog labels must be normalized: {sorted(denormalized)}")


@dataclass(frozen=True)
class IssueLabelStats:
    """Newcomer-label coverage over the issue tracker."""

    total_issues: int
    open_issues: int
    newcomer_labeled_open: int
    matched_labels: frozenset[str]
    coverage_percent: float


class GoalSource(str, Enum):
    README = "readme"
    DESCRIPTION = "description"
    TOPICS = "topics"


@dataclass(frozen=True)
class GoalEvidence:
    source: GoalSource
    matched_term: str


@dataclass(frozen=True)
class GoalTag:
    """A social-good category attributed to the project, with evidence."""

    category: str
    evidence: tuple[GoalEvidence, ...]

    def __post_init__(self):
        if not self.evidence:
            raise ValueError("goal tag requires at least one evidence entry")


def parse_catalog(lines: Iterable[str], source_note: str = "") -> LabelCatalog:
    """Build a catalog from one-label-per-line text; "#" starts a comment."""
    labels = set()
    note = source_note
    for raw in lines:
        line = raw.strip()
        if line.startswith("#"):
            if not note:
                note = line.lstrip("# ").strip()
            continue
        if not line:
            continue
        normalized = normalize_label(line)
        if normalized:
            labels.add(normalized)
    return LabelCatalog(labels=frozenset(labels), source_note=note)


def load_catalog(path: str | Path) -> LabelCatalog:
    text = Path(path).read_text(encoding="utf-8")
    return parse_catalog(text.splitlines(), source_note=str(path))


def default_catalog() -> LabelCatalog:
    """The packaged newcomer-label snapshot."""
    text = resources.files("community_pulse").joinpath("data/newcomer_labels.txt").read_text("utf-8")
    return parse_catalog(text.splitlines())


def parse_taxonomy(lines: Iterable[str]) -> dict[str, tuple[str, ...]]:
    """Parse "category: keyword, keyword, ..." lines into a taxonomy map."""
    taxonomy: dict[str, tuple[str, ...]] = {}
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        category, sep, keyword_text = line.partition(":")
        if not sep:
            raise ValueError(f"taxonomy line missing ':' separator: {line!r}")
        keywords = tuple(
            keyword.strip().lower() for keyword in keyword_text.split(",") if keyword.strip()
        )
        if not keywords:
            continue
        key = category.strip().lower()
        taxonomy[key] = tuple(dict.fromkeys(taxonomy.get(key, ()) + keywords))
    return taxonomy


def load_taxonomy(path: str | Path) -> dict[str, tuple[str, ...]]:
    text = Path(path).read_text(encoding="utf-8")
    return parse_taxonomy(text.splitlines())


def default_taxonomy() -> dict[str, tuple[str, ...]]:
    """The packaged keyword taxonomy for social-good goals."""
    text = resources.files("community_pulse").joinpath("data/goal_taxonomy.txt").read_text("utf-8")
    return parse_taxonomy(text.splitlines())


def label_coverage(issues: Sequence[IssueRecord], catalog: LabelCatalog) -> IssueLabelStats:
    """Coverage of newcomer-friendly labels over open issues.

    An open issue counts as newcomer-labeled when any of its labels is in
    the catalog. matched_labels intersects the catalog with every label
    used anywhere in the project, open or closed, so a project can be
    told apart from one that has the labels but never applies them.
    """
    open_issues = [issue for issue in issues if issue.state is IssueState.OPEN]
    labeled_open = sum(
        1 for issue in open_issues if any(label in catalog.labels for label in issue.labels)
    )
    used_labels = {label for issue in issues for label in issue.labels}
    coverage = 100.0 * labeled_open / len(open_issues) if open_issues else 0.0
    return IssueLabelStats(
        total_issues=len(issues),
        open_issues=len(open_issues),
        newcomer_labeled_open=labeled_open,
        matched_labels=frozenset(catalog.labels & used_labels),
        coverage_percent=coverage,
    )


def _whole_word_pattern(keyword: str) -> re.Pattern:
    return re.compile(rf"\b{re.escape(keyword)}\b", re.IGNORECASE)


def detect_goal_tags(
    readme: str,
    description: str,
    topics: Sequence[str],
    taxonomy: Mapping[str, Sequence[str]],
) -> list[GoalTag]:
    """Attribute goal categories from whole-word keyword hits.

    A category is emitted when at least one of its keywords occurs,
    case-insensitively and at word boundaries, in the README, the
    description, or any topic. Evidence records each distinct
    (source, keyword) hit. Categories are ordered by evidence count
    descending, then name ascending.
    """
    if not taxonomy:
        raise ValueError("taxonomy must be nonempty")
    sources = (
        (GoalSource.README, (readme or "",)),
        (GoalSource.DESCRIPTION, (description or "",)),
        (GoalSource.TOPICS, tuple(topics or ())),
    )
    tags = []
    for category in sorted(taxonomy):
        evidence = []
        for keyword in taxonomy[category]:
            keyword = keyword.lower()
            if not keyword:
                continue
            pattern = _whole_word_pattern(keyword)
            for source, texts in sources:
                if any(pattern.search(text) for text in texts):
                    evidence.append(GoalEvidence(source=source, matched_term=keyword))
        if evidence:
            ordering = {GoalSource.README: 0, GoalSource.DESCRIPTION: 1, GoalSource.TOPICS: 2}
            evidence.sort(key=lambda e: (ordering[e.source], e.matched_term))
            tags.append(GoalTag(category=category, evidence=tuple(evidence)))
    tags.sort(key=lambda tag: (-len(tag.evidence), tag.category))
    return tags
