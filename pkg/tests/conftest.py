import os
import tempfile
from pathlib import Path

# 測試的日誌與輸出不寫入工作目錄
os.environ.setdefault('ABSORBMAP_HOME', str(Path(tempfile.gettempdir()) / 'absorbmap_pytest'))

import numpy as np
import pytest

from src.config.settings import SEED_ENV_VAR
from src.graph.digraph import WeightedDigraph
from src.graph.examples import two_node_pair, three_node, four_clique, grid, random_strongly_connected


@pytest.fixture(autouse=True)
def _no_seed_override(monkeypatch):
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)


@pytest.fixture
def pair():
    return two_node_pair(delta=1.0)


@pytest.fixture
def three():
    return three_node()


@pytest.fixture
def clique():
    return four_clique()


@pytest.fixture
def grid_example():
    return grid()


@pytest.fixture
def two_triangles() -> WeightedDigraph:
    """兩個三角形以一條邊相連"""
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]
    return WeightedDigraph.undirected(edges, n=6)


@pytest.fixture
def random_graph():
    def factory(n: int, seed: int, density: float = 0.3) -> WeightedDigraph:
        return random_strongly_connected(n, np.random.default_rng(seed), density)
    return factory


@pytest.fixture
def random_rates():
    def factory(n: int, seed: int, low: float = 0.01, high: float = 5.0) -> np.ndarray:
        rng = np.random.default_rng((seed, 99))
        return 10 ** rng.uniform(np.log10(low), np.log10(high), n)
    return factory
