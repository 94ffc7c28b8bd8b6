"""Live event source for GitHub-compatible REST APIs.

Transport rules: link-header pagination at page size 100, exponential
backoff on rate limiting capped at 5 attempts, and a credential taken
from the COMMUNITY_PULSE_TOKEN environment variable. Commit, issue, and
pull request pages are fetched concurrently and merged deterministically
by (timestamp, event_id).
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Iterator

import requests

from .errors import AuthError, IngestionError, NotFound, RateLimited
from .ingestion import dedupe_and_sort
from .models import (
    ActorId,
    ContributionEvent,
    EventKind,
    IssueRecord,
    IssueState,
    RepoRef,
    normalize_login,
    parse_rfc3339,
    shift_months,
)

logger = logging.getLogger(__name__)

TOKEN_ENV_VAR = "COMMUNITY_PULSE_TOKEN"
DEFAULT_BASE_URL = "https://api.github.com"
PAGE_SIZE = 100
MAX_ATTEMPTS = 5


@dataclass(frozen=True)
class ProjectMetadata:
    """Descriptive project sources used for goal detection."""

    readme: str = ""
    description: str = ""
    topics: tuple[str, ...] = ()


def actor_from_commit(item: dict, bot_denylist: frozenset[str]) -> ActorId:
    """Resolve the actor of a commit item.

    Commits without a platform login are keyed by the lowercased author
    email local-part, prefixed "email:".
    """
    author = item.get("author") or {}
    login = author.get("login")
    if login:
        return ActorId.from_login(login, bot_denylist)
    email = ((item.get("commit") or {}).get("author") or {}).get("email") or ""
    local_part = normalize_login(email.split("@", 1)[0]) or "unknown"
    return ActorId.from_login(f"email:{local_part}", bot_denylist)


class GitHubSource:
    """Fetches contribution events and issues from a live REST API."""

    def __init__(
        self,
        token: str | None = None,
        base_url: str = DEFAULT_BASE_URL,
        session: requests.Session | None = None,
        bot_denylist: frozenset[str] = frozenset(),
        sleep: Callable[[float], None] = time.sleep,
        clock: Callable[[], datetime] = lambda: datetime.now(timezone.utc),
    ):
        token = token or os.environ.get(TOKEN_ENV_VAR)
        if not token:
            raise AuthError(f"no API credential: set {TOKEN_ENV_VAR}")
        self.base_url = base_url.rstrip("/")
        self.bot_denylist = bot_denylist
        self._sleep = sleep
        self._clock = clock
        self.session = session or requests.Session()
        self.session.headers.update(
            {
                "Accept": "application/vnd.github+json",
                "Authorization": f"Bearer {token}",
            }
        )

    def default_as_of(self, repo: RepoRef) -> datetime:
        del repo
        return self._clock()

    # -- transport ---------------------------------------------------------

    def _get(self, url: str, params: dict | None = None, headers: dict | None = None):
        retry_after: float | None = None
        for attempt in range(MAX_ATTEMPTS):
            response = self.session.get(url, params=params, headers=headers, timeout=30)
            status = response.status_code
            if status == 401:
                raise AuthError("credential rejected by the API")
            if status == 404:
                raise NotFound(f"resource not found: {url}")
            if status in (403, 429) and self._is_rate_limited(response):
                retry_after = self._retry_after(response)
                if attempt + 1 < MAX_ATTEMPTS:
                    delay = retry_after if retry_after is not None else 2.0**attempt
                    logger.warning("rate limited, retrying in %.1fs", delay)
                    self._sleep(delay)
                    continue
                raise RateLimited("rate limit retries exhausted", retry_after=retry_after)
            if status >= 400:
                raise IngestionError(f"unexpected status {status} from {url}")
            return response
        raise RateLimited("rate limit retries exhausted", retry_after=retry_after)

    @staticmethod
    def _is_rate_limited(response) -> bool:
        if response.status_code == 429:
            return True
        return response.headers.get("X-RateLimit-Remaining") == "0"

    @staticmethod
    def _retry_after(response) -> float | None:
        header = response.headers.get("Retry-After")
        if header is not None:
            try:
                return float(header)
            except ValueError:
                return None
        reset = response.headers.get("X-RateLimit-Reset")
        if reset is not None:
            try:
                return max(0.0, float(reset) - time.time())
            except ValueError:
                return None
        return None

    def _paginate(self, path: str, params: dict) -> Iterator[dict]:
        """Yield items across pages, following Link rel="next"."""
        url = f"{self.base_url}{path}"
        query = dict(params, per_page=PAGE_SIZE)
        while url:
            response = self._get(url, params=query)
            query = None  # subsequent link URLs already carry the query
            payload = response.json()
            if not isinstance(payload, list):
                raise IngestionError(f"expected a JSON array from {path}")
            yield from payload
            url = response.links.get("next", {}).get("url")

    # -- fetch operations --------------------------------------------------

    def fetch_events(
        self,
        repo: RepoRef,
        as_of: datetime,
        lookback_months: int,
    ) -> list[ContributionEvent]:
        """All commit/issue/PR creation events in [as_of - lookback, as_of]."""
        if lookback_months < 1:
            raise ValueError("lookback_months must be positive")
        since = shift_months(as_of, -lookback_months)
        with ThreadPoolExecutor(max_workers=3) as pool:
            futures = [
                pool.submit(self._commit_events, repo, since, as_of),
                pool.submit(self._issue_events, repo, since, as_of),
                pool.submit(self._pr_events, repo, since, as_of),
            ]
            collected: list[ContributionEvent] = []
            for future in futures:
                collected.extend(future.result())
        return dedupe_and_sort(collected)

    def _commit_events(self, repo, since, until) -> list[ContributionEvent]:
        events = []
        params = {"since": since.isoformat(), "until": until.isoformat()}
        for item in self._paginate(f"/repos/{repo.owner}/{repo.name}/commits", params):
            timestamp = parse_rfc3339(item["commit"]["author"]["date"])
            if not since <= timestamp <= until:
                continue
            events.append(
                ContributionEvent(
                    event_id=f"commit:{item['sha']}",
                    actor=actor_from_commit(item, self.bot_denylist),
                    kind=EventKind.COMMIT,
                    timestamp=timestamp,
                    repo=repo,
                )
            )
        return events

    def _issue_events(self, repo, since, until) -> list[ContributionEvent]:
        events = []
        params = {"state": "all", "sort": "created", "direction": "desc"}
        for item in self._paginate(f"/repos/{repo.owner}/{repo.name}/issues", params):
            if "pull_request" in item:
                continue  # the issues endpoint interleaves PRs
            created = parse_rfc3339(item["created_at"])
            if created < since:
                break  # pages are newest-first; everything after is older
            if created > until:
                continue
            events.append(
                ContributionEvent(
                    event_id=f"issue:{item['number']}",
                    actor=ActorId.from_login(item["user"]["login"], self.bot_denylist),
                    kind=EventKind.ISSUE_OPENED,
                    timestamp=created,
                    repo=repo,
                )
            )
        return events

    def _pr_events(self, repo, since, until) -> list[ContributionEvent]:
        events = []
        params = {"state": "all", "sort": "created", "direction": "desc"}
        for item in self._paginate(f"/repos/{repo.owner}/{repo.name}/pulls", params):
            created = parse_rfc3339(item["created_at"])
            if created < since:
                break
            if created > until:
                continue
            events.append(
                ContributionEvent(
                    event_id=f"pr:{item['number']}",
                    actor=ActorId.from_login(item["user"]["login"], self.bot_denylist),
                    kind=EventKind.PR_OPENED,
                    timestamp=created,
                    repo=repo,
                )
            )
        return events

    def fetch_issues(self, repo: RepoRef) -> list[IssueRecord]:
        """All issues regardless of state, with normalized labels."""
        issues = []
        for item in self._paginate(
            f"/repos/{repo.owner}/{repo.name}/issues", {"state": "all"}
        ):
            if "pull_request" in item:
                continue
            issues.append(
                IssueRecord(
                    issue_id=str(item["number"]),
                    state=IssueState(item["state"]),
                    labels=[label["name"] for label in item.get("labels", [])],
                    created_at=parse_rfc3339(item["created_at"]),
                )
            )
        return sorted(issues, key=lambda issue: issue.issue_id)

    def fetch_project_metadata(self, repo: RepoRef) -> ProjectMetadata:
        """README text, description, and topics for goal detection."""
        info = self._get(f"{self.base_url}/repos/{repo.owner}/{repo.name}").json()
        try:
            readme_response = self._get(
                f"{self.base_url}/repos/{repo.owner}/{repo.name}/readme",
                headers={"Accept": "application/vnd.github.raw+json"},
            )
            readme = readme_response.text
        except NotFound:
            readme = ""
        return ProjectMetadata(
            readme=readme,
            description=info.get("description") or "",
            topics=tuple(info.get("topics") or ()),
        )
