"""Shared fixtures."""
import sys
from pathlib import Path

import pytest

# Add the project root to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.config import Config  # noqa: E402


@pytest.fixture
def config():
    """Default numerics with a single worker so logs stay ordered."""
    return Config(workers=1)


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "output"
    path.mkdir()
    return path
