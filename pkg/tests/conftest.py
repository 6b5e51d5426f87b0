import shutil
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def work(tmp_path) -> Path:
    """Scratch directory preloaded with a copy of every fixture file."""
    dst = tmp_path / "work"
    shutil.copytree(FIXTURES, dst)
    return dst
