"""N_ws 個環形晶格子圖加上隨機橋接邊的網路"""
import logging
from dataclasses import dataclass

import numpy as np
import networkx as nx

from src.graph.digraph import WeightedDigraph


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RingLatticeSpec:
    """
    Parameters
    ----------
    n_ws : int
        每個晶格的節點數
    N_ws : int
        晶格數
    k_ws : int
        每個節點的晶格鄰居數 (偶數)，節點 i 與 i +- j (mod n_ws), j <= k_ws / 2 相連
    seed : int
        橋接邊的亂數種子
    """
    n_ws: int = 12
    N_ws: int = 20
    k_ws: int = 6
    seed: int = 0

    def __post_init__(self):
        if self.k_ws % 2 or self.k_ws <= 0:
            raise ValueError(f"k_ws must be a positive even number, got {self.k_ws}")
        if self.k_ws >= self.n_ws:
            raise ValueError(f"k_ws must be smaller than n_ws, got k_ws={self.k_ws}, n_ws={self.n_ws}")
        if self.N_ws < 1:
            raise ValueError(f"N_ws must be >= 1, got {self.N_ws}")

    @property
    def n(self) -> int:
        return self.n_ws * self.N_ws


@dataclass(frozen=True)
class RingNetwork:
    spec: RingLatticeSpec
    graph: WeightedDigraph
    bridges: tuple[tuple[int, int], ...]   # 加入順序，i < j
    lattice_of: np.ndarray                 # 節點 -> 晶格編號

    def lattice_neighbors(self, node: int) -> set[int]:
        n_ws, half = self.spec.n_ws, self.spec.k_ws // 2
        offset = node - node % n_ws
        local = node % n_ws
        return {offset + (local + j) % n_ws for j in range(-half, half + 1) if j}

    def neighbors(self, node: int) -> set[int]:
        return set(np.flatnonzero(self.graph.adjacency[:, node]).tolist())

    def members(self, lattice: int) -> np.ndarray:
        return np.flatnonzero(self.lattice_of == lattice)


def build_network(spec: RingLatticeSpec) -> RingNetwork:
    """各晶格以 watts_strogatz_graph(n_ws, k_ws, 0) 建立，再加入 n_ws * N_ws 條隨機橋接邊

    橋接邊由所有節點對中均勻抽取，拒絕自身配對與已經相連的節點對。
    """
    G = nx.Graph()
    for lattice in range(spec.N_ws):
        ring = nx.watts_strogatz_graph(spec.n_ws, spec.k_ws, 0)
        G.update(nx.relabel_nodes(ring, {i: i + lattice * spec.n_ws for i in ring.nodes}))

    rng = np.random.default_rng(spec.seed)
    bridges: list[tuple[int, int]] = []
    target = spec.n_ws * spec.N_ws
    max_pairs = spec.n * (spec.n - 1) // 2 - G.number_of_edges()
    if target > max_pairs:
        raise ValueError(f"Cannot place {target} bridges, only {max_pairs} free node pairs")

    while len(bridges) < target:
        i, j = (int(x) for x in rng.integers(spec.n, size=2))
        if i == j or G.has_edge(i, j):
            continue
        G.add_edge(i, j)
        bridges.append((min(i, j), max(i, j)))

    A = nx.to_numpy_array(G, nodelist=range(spec.n))
    lattice_of = np.arange(spec.n) // spec.n_ws
    inter = sum(lattice_of[i] != lattice_of[j] for i, j in bridges)
    logger.info(f"網路建立完成: {spec.n} 個節點, {len(bridges)} 條橋接邊 ({inter} 條跨晶格)")
    return RingNetwork(spec, WeightedDigraph(A), tuple(bridges), lattice_of)
