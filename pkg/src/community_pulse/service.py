"""HTTP service exposing trends, rising contributors, and recommendations.

All endpoints live under /api/v1 and speak JSON only. Errors always
carry {"status", "code", "message"} with codes drawn from a closed set:

    auth_required, illegal_transition, invalid_action, invalid_fixture,
    invalid_request, invalid_state, invalid_until, invalid_window,
    not_found, not_ingested, rate_limited, validation_error

GET endpoints are side-effect-free and depend only on the store files,
so identical snapshots produce identical bodies. Writes (ingest and
recommendation actions) are serialized per store file; expired snoozes
are returned to pending on the action path before the action applies.

When a built dashboard bundle is available its directory is served at
the root path, making the service a one-binary deployment.
"""

from __future__ import annotations

import logging
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import (
    AuthError,
    IllegalTransition,
    InvalidSnooze,
    NotFound,
    ParseError,
    RateLimited,
)
from .github import GitHubSource
from .ingestion import FixtureSource
from .models import RecommendationState, RepoRef, parse_rfc3339
from .pipeline import (
    PipelineConfig,
    analyze_store,
    ingest_and_analyze,
    wake_expired_in_store,
)
from .recommendations import RecommendationAction, apply_action
from .schemas import (
    ActionRequest,
    AnalysisReportModel,
    IngestReportModel,
    IngestRequest,
    RecommendationModel,
    RisingContributorModel,
    TrendPointModel,
)
from .store import DEFAULT_STORE_DIR, ContributionStore, store_path_for

logger = logging.getLogger(__name__)


class ApiException(Exception):
    """An error the service reports as a structured JSON body."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


def create_app(
    store_root: str | Path = DEFAULT_STORE_DIR,
    config: Optional[PipelineConfig] = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service around a store directory and pipeline config."""
    root = Path(store_root)
    cfg = config or PipelineConfig()
    app = FastAPI(title="community-pulse", version="0.1.0")
    write_locks: dict[Path, threading.Lock] = {}
    registry_lock = threading.Lock()

    def lock_for(path: Path) -> threading.Lock:
        with registry_lock:
            return write_locks.setdefault(path, threading.Lock())

    def open_store(owner: str, name: str) -> tuple[ContributionStore, RepoRef]:
        try:
            repo = RepoRef(owner=owner, name=name)
        except ValueError as exc:
            raise ApiException(400, "invalid_request", str(exc)) from exc
        path = store_path_for(repo, root)
        if not path.exists():
            raise ApiException(404, "not_ingested", f"{repo.slug} has not been ingested")
        return ContributionStore(path, cfg.bot_denylist), repo

    @app.exception_handler(ApiException)
    async def handle_api_exception(request: Request, exc: ApiException):
        del request
        body = {"status": exc.status, "code": exc.code, "message": exc.message}
        return JSONResponse(status_code=exc.status, content=body)

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        del request
        body = {"status": 422, "code": "validation_error", "message": str(exc.errors()[:1])}
        return JSONResponse(status_code=422, content=body)

    @app.get("/api/v1/projects")
    def list_projects():
        projects = []
        if root.exists():
            for path in sorted(root.glob("*.ndjson")):
                owner, sep, name = path.stem.partition("__")
                if sep:
                    projects.append({"owner": owner, "name": name, "slug": f"{owner}/{name}"})
        return projects

    @app.get("/api/v1/projects/{owner}/{name}/trends")
    def get_trends(owner: str, name: str, window: str = "6"):
        try:
            window_months = int(window)
        except ValueError:
            raise ApiException(400, "invalid_window", f"window must be an integer: {window!r}")
        if window_months < 1:
            raise ApiException(400, "invalid_window", "window must be positive")
        store, repo = open_store(owner, name)
        request_cfg = _with_window(cfg, window_months)
        result = analyze_store(store, repo, request_cfg)
        return [TrendPointModel.from_core(p).model_dump() for p in result.trends]

    @app.get("/api/v1/projects/{owner}/{name}/rising")
    def get_rising(owner: str, name: str, include_members: str = "false"):
        include = _parse_bool(include_members, "include_members")
        store, repo = open_store(owner, name)
        result = analyze_store(store, repo, cfg)
        contributors = result.rising_all if include else result.rising
        return [RisingContributorModel.from_core(r).model_dump() for r in contributors]

    @app.get("/api/v1/projects/{owner}/{name}/recommendations")
    def get_recommendations(owner: str, name: str, state: Optional[str] = None):
        wanted: Optional[RecommendationState] = None
        if state is not None:
            try:
                wanted = RecommendationState(state)
            except ValueError:
                raise ApiException(400, "invalid_state", f"unknown state {state!r}")
        store, _ = open_store(owner, name)
        recs = store.recommendations()
        if wanted is not None:
            recs = [r for r in recs if r.state is wanted]
        return [RecommendationModel.from_core(r).model_dump() for r in recs]

    @app.post("/api/v1/recommendations/{rec_id}/action")
    def post_action(rec_id: str, request: ActionRequest):
        try:
            action = RecommendationAction(request.action)
        except ValueError:
            raise ApiException(400, "invalid_action", f"unknown action {request.action!r}")
        now = _utcnow()
        until = None
        if request.until is not None:
            try:
                until = parse_rfc3339(request.until)
            except ValueError:
                raise ApiException(400, "invalid_until", f"bad timestamp {request.until!r}")
        store_path = _find_recommendation_store(root, rec_id, cfg)
        if store_path is None:
            raise ApiException(404, "not_found", f"no recommendation with id {rec_id!r}")
        with lock_for(store_path):
            store = ContributionStore(store_path, cfg.bot_denylist)
            wake_expired_in_store(store, now)
            current = store.recommendation(rec_id)
            if current is None:
                raise ApiException(404, "not_found", f"no recommendation with id {rec_id!r}")
            try:
                updated = apply_action(current, action, now, until)
            except IllegalTransition as exc:
                raise ApiException(409, "illegal_transition", str(exc)) from exc
            except InvalidSnooze as exc:
                raise ApiException(400, "invalid_until", str(exc)) from exc
            store.upsert_recommendations([updated])
        return RecommendationModel.from_core(updated).model_dump()

    @app.post("/api/v1/projects/{owner}/{name}/ingest")
    def post_ingest(owner: str, name: str, request: IngestRequest):
        try:
            repo = RepoRef(owner=owner, name=name)
        except ValueError as exc:
            raise ApiException(400, "invalid_request", str(exc)) from exc
        source = _build_source(request, cfg)
        path = store_path_for(repo, root)
        with lock_for(path):
            store = ContributionStore(path, cfg.bot_denylist)
            try:
                outcome, result = ingest_and_analyze(store, source, repo, cfg)
            except AuthError as exc:
                raise ApiException(401, "auth_required", str(exc)) from exc
            except RateLimited as exc:
                raise ApiException(429, "rate_limited", str(exc)) from exc
            except NotFound as exc:
                raise ApiException(404, "not_found", str(exc)) from exc
        if outcome.errors:
            logger.warning("partial ingestion for %s: %s", repo.slug, outcome.errors)
        return IngestReportModel.from_run(outcome.events_new, result).model_dump()

    bundle = _frontend_bundle(frontend_dir)
    if bundle is not None:
        app.mount("/", StaticFiles(directory=bundle, html=True), name="dashboard")
    else:

        @app.get("/")
        def index():
            return {"service": "community-pulse", "api": "/api/v1", "docs": "/docs"}

    return app


def _with_window(cfg: PipelineConfig, window_months: int) -> PipelineConfig:
    if window_months == cfg.window_months:
        return cfg
    threshold = min(cfg.threshold, window_months)
    return PipelineConfig(
        window_months=window_months,
        threshold=threshold,
        coverage_threshold=cfg.coverage_threshold,
        exclude_members=cfg.exclude_members,
        membership=cfg.membership,
        bot_denylist=cfg.bot_denylist,
        catalog=cfg.catalog,
        taxonomy=cfg.taxonomy,
    )


def _parse_bool(raw: str, param: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in {"true", "1", "yes"}:
        return True
    if lowered in {"false", "0", "no"}:
        return False
    raise ApiException(400, "invalid_request", f"{param} must be true or false, got {raw!r}")


def _build_source(request: IngestRequest, cfg: PipelineConfig):
    if request.source == "fixture":
        if not request.path:
            raise ApiException(422, "invalid_fixture", "fixture ingest requires a path")
        path = Path(request.path)
        if not path.exists():
            raise ApiException(422, "invalid_fixture", f"fixture not found: {path}")
        try:
            return FixtureSource(path, cfg.bot_denylist)
        except ParseError as exc:
            raise ApiException(422, "invalid_fixture", str(exc)) from exc
    try:
        return GitHubSource(bot_denylist=cfg.bot_denylist)
    except AuthError as exc:
        raise ApiException(401, "auth_required", str(exc)) from exc


def _find_recommendation_store(
    root: Path, rec_id: str, cfg: PipelineConfig
) -> Optional[Path]:
    if not root.exists():
        return None
    for path in sorted(root.glob("*.ndjson")):
        store = ContributionStore(path, cfg.bot_denylist)
        if store.recommendation(rec_id) is not None:
            return path
    return None


def _frontend_bundle(frontend_dir: str | Path | None) -> Optional[Path]:
    if frontend_dir is None:
        return None
    candidate = Path(frontend_dir)
    if candidate.is_dir() and (candidate / "index.html").exists():
        return candidate
    return None
