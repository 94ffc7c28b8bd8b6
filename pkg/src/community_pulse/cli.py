"""Operator command line: ingest, analyze, export-trends, serve, refresh-catalog.

The CLI is a thin layer over the pipeline functions the HTTP service
uses, so its numbers always agree with API responses for the same
store snapshot.

Exit codes: 0 success, 1 fatal error, 2 partial ingestion failure.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .errors import CommunityPulseError, IngestionError, ParseError
from .github import GitHubSource
from .ingestion import FixtureSource
from .models import RepoRef, normalize_label
from .pipeline import (
    AnalysisResult,
    IngestOutcome,
    PipelineConfig,
    analyze_store,
    ingest_and_analyze,
    load_membership,
    refresh_recommendations,
)
from .analytics import trends_to_csv
from .schemas import AnalysisReportModel
from .store import DEFAULT_STORE_DIR, ContributionStore, store_path_for

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2


def _fail(message: str) -> "SystemExit":
    click.echo(f"error: {message}", err=True)
    return SystemExit(EXIT_FATAL)


def _build_config(
    window: int,
    threshold: int,
    membership: Optional[str],
    lookback_months: Optional[int] = None,
    full_history: bool = False,
) -> PipelineConfig:
    if threshold > window:
        raise _fail(f"threshold {threshold} must not exceed window {window}")
    members = load_membership(membership) if membership else frozenset()
    return PipelineConfig(
        window_months=window,
        threshold=threshold,
        membership=members,
        lookback_months=lookback_months,
        full_history=full_history,
    )


def _resolve_store(repo: RepoRef, store: Optional[str]) -> Path:
    return Path(store) if store else store_path_for(repo)


def _parse_repo(value: str) -> RepoRef:
    try:
        return RepoRef.parse(value)
    except ValueError as exc:
        raise _fail(str(exc))


@click.group()
@click.version_option(version=__version__, prog_name="community-pulse")
def main():
    """Community health analytics and recommendations for maintainers."""


@main.command()
@click.option("--repo", required=True, help="Repository as owner/name.")
@click.option("--fixture", type=click.Path(), help="Ingest from a fixture file instead of the live API.")
@click.option("--store", type=click.Path(), help="Store file path (default ./.community-pulse/owner__name.ndjson).")
@click.option("--window", default=6, show_default=True, help="Analysis window in months.")
@click.option("--threshold", default=3, show_default=True, help="Active months required for a rising contributor.")
@click.option("--membership", type=click.Path(exists=True), help="File of team-member logins, one per line.")
@click.option("--lookback-months", type=int, help="History horizon in months (default window + 24).")
@click.option("--full-history", is_flag=True, help="Ingest the full available history.")
def ingest(repo, fixture, store, window, threshold, membership, lookback_months, full_history):
    """Acquire events and issues into the store and refresh recommendations."""
    repo_ref = _parse_repo(repo)
    config = _build_config(window, threshold, membership, lookback_months, full_history)
    outcome, result = _run_pipeline(repo_ref, fixture, store, config)
    click.echo(
        f"events_new={outcome.events_new} issues_new={outcome.issues_new} "
        f"newcomers={len(result.newcomers)} rising={len(result.rising)} "
        f"recommendations_pending={len(result.pending)}"
    )
    raise SystemExit(_ingestion_exit_code(outcome))


@main.command()
@click.option("--repo", required=True, help="Repository as owner/name.")
@click.option("--fixture", type=click.Path(), help="Analyze a fixture file instead of the live API.")
@click.option("--store", type=click.Path(), help="Store file path (default ./.community-pulse/owner__name.ndjson).")
@click.option("--window", default=6, show_default=True, help="Analysis window in months.")
@click.option("--threshold", default=3, show_default=True, help="Active months required for a rising contributor.")
@click.option("--membership", type=click.Path(exists=True), help="File of team-member logins, one per line.")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["json", "csv", "text"]),
    default="text",
    show_default=True,
)
def analyze(repo, fixture, store, window, threshold, membership, output_format):
    """Report trends, rising contributors, label stats, goals, and pending items."""
    repo_ref = _parse_repo(repo)
    config = _build_config(window, threshold, membership)
    store_path = _resolve_store(repo_ref, store)

    outcome = IngestOutcome()
    if fixture:
        outcome, result = _run_pipeline(repo_ref, fixture, store, config)
    elif store_path.exists():
        result = refresh_recommendations(
            ContributionStore(store_path, config.bot_denylist), repo_ref, config
        )
    else:
        outcome, result = _run_pipeline(repo_ref, None, store, config)

    report = AnalysisReportModel.from_result(result)
    click.echo(_render_report(report, output_format))
    raise SystemExit(_ingestion_exit_code(outcome))


@main.command("export-trends")
@click.option("--repo", required=True, help="Repository as owner/name.")
@click.option("--store", type=click.Path(), help="Store file path.")
@click.option("--window", default=6, show_default=True, help="Analysis window in months.")
@click.option("--out", required=True, type=click.Path(), help="CSV output path.")
def export_trends(repo, store, window, out):
    """Write the joining/activity/retention series as CSV."""
    repo_ref = _parse_repo(repo)
    store_path = _resolve_store(repo_ref, store)
    if not store_path.exists():
        raise _fail(f"no store at {store_path}; run ingest first")
    config = PipelineConfig(window_months=window, threshold=min(3, window))
    result = analyze_store(ContributionStore(store_path), repo_ref, config)
    try:
        Path(out).write_text(trends_to_csv(result.trends), encoding="utf-8")
    except OSError as exc:
        raise _fail(f"cannot write {out}: {exc}")
    click.echo(f"wrote {len(result.trends)} rows to {out}")


@main.command()
@click.option("--store", type=click.Path(), default=str(DEFAULT_STORE_DIR), show_default=True, help="Store directory.")
@click.option("--port", default=8080, show_default=True, help="Listen port.")
@click.option("--bind", default="127.0.0.1", show_default=True, help="Bind address.")
@click.option("--window", default=6, show_default=True, help="Analysis window in months.")
@click.option("--threshold", default=3, show_default=True, help="Active months required for a rising contributor.")
@click.option("--membership", type=click.Path(exists=True), help="File of team-member logins, one per line.")
@click.option("--frontend", type=click.Path(), help="Directory with a built dashboard bundle to serve at /.")
def serve(store, port, bind, window, threshold, membership, frontend):
    """Run the HTTP service (and the dashboard, when a bundle is present)."""
    import uvicorn

    from .service import create_app

    if frontend is None and (Path("frontend") / "dist" / "index.html").exists():
        frontend = Path("frontend") / "dist"
    config = _build_config(window, threshold, membership)
    app = create_app(store_root=store, config=config, frontend_dir=frontend)
    uvicorn.run(app, host=bind, port=port)


@main.command("refresh-catalog")
@click.option("--source", required=True, help="Path or URL of a raw label list.")
@click.option("--out", required=True, type=click.Path(), help="Catalog file to write.")
def refresh_catalog(source, out):
    """Normalize, deduplicate, and sort a label list into a catalog file."""
    try:
        raw = _read_source(source)
    except Exception as exc:  # noqa: BLE001 - any fetch/read failure leaves `out` untouched
        raise _fail(f"cannot read {source}: {exc}")
    labels = set()
    for line in raw.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        normalized = normalize_label(stripped)
        if normalized:
            labels.add(normalized)
    if not labels:
        raise _fail(f"{source} contained no labels; existing file left untouched")
    body = "# Newcomer-friendly label catalog.\n" + "\n".join(sorted(labels)) + "\n"
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    Path(out).write_text(body, encoding="utf-8")
    click.echo(f"wrote {len(labels)} labels to {out}")


def _read_source(source: str) -> str:
    if source.startswith(("http://", "https://")):
        import requests

        response = requests.get(source, timeout=30)
        response.raise_for_status()
        return response.text
    return Path(source).read_text(encoding="utf-8")


def _run_pipeline(
    repo_ref: RepoRef,
    fixture: Optional[str],
    store: Optional[str],
    config: PipelineConfig,
) -> tuple[IngestOutcome, AnalysisResult]:
    store_path = _resolve_store(repo_ref, store)
    contribution_store = ContributionStore(store_path, config.bot_denylist)
    try:
        if fixture:
            source = FixtureSource(fixture, config.bot_denylist)
        else:
            source = GitHubSource(bot_denylist=config.bot_denylist)
    except ParseError as exc:
        raise _fail(f"fixture {fixture}: {exc}")
    except FileNotFoundError:
        raise _fail(f"fixture not found: {fixture}")
    except IngestionError as exc:
        raise _fail(str(exc))
    try:
        outcome, result = ingest_and_analyze(contribution_store, source, repo_ref, config)
    except CommunityPulseError as exc:
        raise _fail(str(exc))
    for message in outcome.errors:
        click.echo(f"warning: {message}", err=True)
    if outcome.errors and not outcome.acquired_anything and len(contribution_store) == 0:
        raise _fail("ingestion failed and the store is empty")
    return outcome, result


def _ingestion_exit_code(outcome: IngestOutcome) -> int:
    return EXIT_PARTIAL if outcome.errors else EXIT_OK


def _render_report(report: AnalysisReportModel, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(report.model_dump(), indent=2, sort_keys=True)
    if output_format == "csv":
        return _render_csv(report)
    return _render_text(report)


def _render_csv(report: AnalysisReportModel) -> str:
    lines = ["# trends", "month,joined,active,retained"]
    for point in report.trends:
        lines.append(f"{point.month},{point.joined},{point.active},{point.retained}")
    lines.append("# rising")
    lines.append("login,active_months,commits,issues,prs")
    for entry in report.rising:
        months = ";".join(entry.active_months)
        lines.append(
            f"{entry.login},{months},{entry.totals.commits},{entry.totals.issues},{entry.totals.prs}"
        )
    lines.append("# labels")
    lines.append("total_issues,open_issues,newcomer_labeled_open,coverage_percent,matched_labels")
    labels = report.labels
    lines.append(
        f"{labels.total_issues},{labels.open_issues},{labels.newcomer_labeled_open},"
        f"{labels.coverage_percent},{';'.join(labels.matched_labels)}"
    )
    lines.append("# goals")
    lines.append("category,source,matched_term")
    for goal in report.goals:
        for evidence in goal.evidence:
            lines.append(f"{goal.category},{evidence.source},{evidence.matched_term}")
    lines.append("# recommendations")
    lines.append("id,kind,target,state")
    for rec in report.recommendations:
        lines.append(f"{rec.id},{rec.kind},{rec.target},{rec.state}")
    return "\n".join(lines)


def _render_text(report: AnalysisReportModel) -> str:
    lines = [f"Repository: {report.repo}"]
    if report.window:
        lines.append(
            f"Window: {report.window.months[0]}..{report.window.months[-1]}"
            f" (as of {report.window.as_of})"
        )
    else:
        lines.append("Window: no activity ingested yet")
    lines.append("")
    lines.append("Newcomer trends:")
    lines.append("  month    joined active retained")
    for point in report.trends:
        lines.append(f"  {point.month}  {point.joined} {point.active} {point.retained}")
    lines.append("")
    lines.append("Rising contributors:")
    if not report.rising:
        lines.append("  none in this window")
    for entry in report.rising:
        months = ", ".join(entry.active_months)
        lines.append(
            f"  {entry.login}: {len(entry.active_months)} active months ({months}), "
            f"commits={entry.totals.commits} issues={entry.totals.issues} prs={entry.totals.prs}"
        )
    lines.append("")
    labels = report.labels
    lines.append(
        f"Label coverage: {labels.coverage_percent}% of {labels.open_issues} open issues "
        f"carry a newcomer-friendly label ({labels.newcomer_labeled_open} labeled)"
    )
    if labels.matched_labels:
        lines.append(f"  catalog labels in use: {', '.join(labels.matched_labels)}")
    lines.append("")
    lines.append("Goal tags (keyword-based):")
    if not report.goals:
        lines.append("  none detected")
    for goal in report.goals:
        terms = ", ".join(f"{e.source}:{e.matched_term}" for e in goal.evidence)
        lines.append(f"  {goal.category}: {terms}")
    lines.append("")
    lines.append("Pending recommendations:")
    if not report.recommendations:
        lines.append("  none")
    for rec in report.recommendations:
        lines.append(f"  [{rec.id}] {rec.kind} -> {rec.target}")
    return "\n".join(lines)


if __name__ == "__main__":
    main()
