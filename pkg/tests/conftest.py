from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    """Point the observation cache at a per-test directory.

    Keeps tests from seeing each other's cached series and from writing
    into the user's home cache.
    """
    monkeypatch.setenv("INNOMETER_CACHE_DIR", str(tmp_path / "obs-cache"))
