"""
Shared fixtures: paths to the sample files and a clean settings cache.
"""
from pathlib import Path

import pytest

from dualgraph.config import get_settings
from dualgraph.graph_core import Graph

ROOT = Path(__file__).resolve().parent.parent
SAMPLES = ROOT / "samples"
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("DUALGRAPH_LOG_LEVEL", "DUALGRAPH_LOG_FORMAT", "DUALGRAPH_LIFT_STEP_LIMIT"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def theta() -> Graph:
    return Graph.from_edges(["u", "v"], [("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v")])


@pytest.fixture
def loop() -> Graph:
    return Graph.from_edges(["v"], [("e", "v", "v")])


@pytest.fixture
def two_gon() -> Graph:
    return Graph.from_edges(["v1", "v2"], [("e1", "v1", "v2"), ("e2", "v2", "v1")])
