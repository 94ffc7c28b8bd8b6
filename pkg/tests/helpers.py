"""Shared test builders and independent brute-force oracles.

The oracles work on primitive tuples and naive month arithmetic on
purpose: they must not share code paths with the package they check.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from community_pulse.models import (
    ActorId,
    ContributionEvent,
    EventKind,
    RepoRef,
    parse_rfc3339,
)

REPO = RepoRef.parse("acme/solar")

KINDS = ("commit", "issue_opened", "pr_opened")


def utc(year, month, day, hour=0, minute=0, second=0):
    return datetime(year, month, day, hour, minute, second, tzinfo=timezone.utc)


def make_event(event_id, login, kind, ts, repo=REPO, denylist=()):
    if isinstance(ts, str):
        ts = parse_rfc3339(ts)
    if isinstance(kind, str):
        kind = EventKind(kind)
    return ContributionEvent(
        event_id=event_id,
        actor=ActorId.from_login(login, denylist),
        kind=kind,
        timestamp=ts,
        repo=repo,
    )


# -- raw history generation -------------------------------------------------
#
# A raw event is (event_id, login, kind_str, datetime). Both the library
# inputs and the oracle inputs derive from the same raw list.


def random_history(
    rng: random.Random,
    as_of: datetime = utc(2021, 6, 20, 12),
    window_months: int = 6,
    pre_months: int = 4,
    n_actors: int = 6,
    max_events: int = 50,
    bot_share: float = 0.2,
):
    """Random raw events spanning pre-window and window months."""
    logins = []
    for i in range(n_actors):
        if rng.random() < bot_share:
            logins.append(f"robo{i}[bot]")
        else:
            logins.append(f"user{i}")
    span_start = _shift_month((as_of.year, as_of.month), -(window_months - 1 + pre_months))
    total_months = window_months + pre_months
    raw = []
    for i in range(rng.randint(0, max_events)):
        year, month = _shift_month(span_start, rng.randrange(total_months))
        ts = datetime(year, month, rng.randint(1, 28), rng.randint(0, 23), tzinfo=timezone.utc)
        if ts > as_of:
            ts = as_of - timedelta(hours=rng.randint(1, 48))
        raw.append((f"e{i}", rng.choice(logins), rng.choice(KINDS), ts))
    return raw


def to_events(raw, repo=REPO):
    return [make_event(eid, login, kind, ts, repo=repo) for eid, login, kind, ts in raw]


# -- oracle month arithmetic -------------------------------------------------


def _shift_month(ym, n):
    year, month = ym
    month0 = month - 1 + n
    return (year + month0 // 12, month0 % 12 + 1)


def oracle_window(as_of: datetime, n: int):
    """The n (year, month) pairs ending with as_of's UTC month."""
    end = (as_of.year, as_of.month)
    return [_shift_month(end, i) for i in range(1 - n, 1)]


def _non_bot(raw):
    return [e for e in raw if not e[1].lower().strip().endswith("[bot]")]


def oracle_first_months(raw):
    """login -> earliest (year, month) over all history, bots skipped."""
    firsts = {}
    for _, login, _, ts in _non_bot(raw):
        login = login.lower().strip()
        ym = (ts.year, ts.month)
        if login not in firsts or ym < firsts[login]:
            firsts[login] = ym
    return firsts


def oracle_activity(raw):
    """Set of (login, (year, month)) pairs with any event, bots skipped."""
    return {
        (login.lower().strip(), (ts.year, ts.month)) for _, login, _, ts in _non_bot(raw)
    }


def oracle_newcomers(raw, months):
    month_set = set(months)
    return {login for login, first in oracle_first_months(raw).items() if first in month_set}


def oracle_trends(raw, months):
    """(joined, active, retained) per month by exhaustive triple loop."""
    firsts = oracle_first_months(raw)
    activity = oracle_activity(raw)
    newcomers = oracle_newcomers(raw, months)
    rows = []
    for t in months:
        joined = [login for login in newcomers if firsts[login] == t]
        active = sum(1 for login in newcomers if (login, t) in activity)
        retained = 0
        for login in joined:
            for later in months:
                if later > t and (login, later) in activity:
                    retained += 1
                    break
        rows.append((t, len(joined), active, retained))
    return rows


def oracle_rising(raw, months, threshold):
    activity = oracle_activity(raw)
    risers = set()
    for login in oracle_newcomers(raw, months):
        active_months = sum(1 for t in months if (login, t) in activity)
        if active_months >= threshold:
            risers.add(login)
    return risers


def oracle_totals(raw, login, months):
    """(commits, issues, prs) for one login over the window months."""
    month_set = set(months)
    counts = {"commit": 0, "issue_opened": 0, "pr_opened": 0}
    for _, event_login, kind, ts in raw:
        if event_login.lower().strip() == login and (ts.year, ts.month) in month_set:
            counts[kind] += 1
    return (counts["commit"], counts["issue_opened"], counts["pr_opened"])


def oracle_word_hits(text: str, keyword: str) -> bool:
    """Whole-word keyword search by manual scanning, no regular expressions.

    Assumes the keyword starts and ends with a word character, which
    holds for every taxonomy keyword.
    """
    word_chars = set("abcdefghijklmnopqrstuvwxyz0123456789_")
    lowered = text.lower()
    keyword = keyword.lower()
    start = 0
    while True:
        index = lowered.find(keyword, start)
        if index < 0:
            return False
        before = lowered[index - 1] if index > 0 else ""
        after_pos = index + len(keyword)
        after = lowered[after_pos] if after_pos < len(lowered) else ""
        if before not in word_chars and after not in word_chars:
            return True
        start = index + 1
