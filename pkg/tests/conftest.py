from pathlib import Path

import pytest

from community_pulse.models import RepoRef
from community_pulse.store import ContributionStore

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def repo() -> RepoRef:
    return RepoRef.parse("acme/solar")


@pytest.fixture
def small_fixture() -> Path:
    return DATA_DIR / "small.ndjson"


@pytest.fixture
def tmp_store(tmp_path) -> ContributionStore:
    return ContributionStore(tmp_path / "store.ndjson")
