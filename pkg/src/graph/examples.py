"""文獻中的範例網路: 三節點圖、四團網路、6x6 網格"""
from dataclasses import dataclass

import numpy as np

from src.graph.digraph import WeightedDigraph, AbsorptionConfig


@dataclass(frozen=True)
class ExampleNetwork:
    """範例網路與其吸收率、預設的社群劃分"""
    graph: WeightedDigraph
    absorption: AbsorptionConfig
    planted: dict[str, tuple[int, ...]]  # 名稱 -> 節點標籤 (node -> community)


def two_node_pair(delta: float | tuple[float, float] = 1.0, h: float = 0.0) -> ExampleNetwork:
    """雙向單位邊的兩個節點"""
    graph = WeightedDigraph(np.array([[0.0, 1.0], [1.0, 0.0]]))
    return ExampleNetwork(graph, AbsorptionConfig(np.broadcast_to(delta, 2), h), {'pair': (0, 0)})


def three_node(delta: tuple[float, float, float] = (0.1, 0.1, 0.1), h: float = 0.0) -> ExampleNetwork:
    """三節點網路，節點 1 與 3 互連且節點 2 指向兩者 (0-indexed: 0, 2 與 1)

    a_ij 為 j -> i 的權重，因此 A 的列為 (0,1,1), (0,0,0), (1,1,0)。
    """
    A = np.array([[0.0, 1.0, 1.0],
                  [0.0, 0.0, 0.0],
                  [1.0, 1.0, 0.0]])
    planted = {
        'one_community': (0, 0, 0),
        'isolated_middle': (0, 1, 0),   # {{2}, {1, 3}}
        'isolated_first': (0, 1, 1),    # {{1}, {2, 3}}
        'isolated_last': (0, 0, 1),     # {{1, 2}, {3}}
        'singletons': (0, 1, 2),
    }
    return ExampleNetwork(WeightedDigraph(A), AbsorptionConfig(np.asarray(delta, dtype=float), h), planted)


# 相鄰兩團之間各一條橋 (C1-C2, C2-C3, C3-C4, C4-C1)
FOUR_CLIQUE_RING = [(3, 4), (7, 8), (11, 12), (15, 0)]


def four_clique(delta_high: float = 7.0, delta_low: float = 1.0, h: float = 0.0) -> ExampleNetwork:
    """四個 4-團 C1..C4 串成環，相鄰兩團以一條邊相連

    橋的端點 (0, 3, 4, 7, 8, 11, 12, 15) 的 omega_i = 4，其餘節點為 3。
    C1, C3 的吸收率為 delta_high，C2, C4 為 delta_low。
    """
    edges = []
    for c in range(4):
        members = range(4 * c, 4 * c + 4)
        edges += [(i, j) for i in members for j in members if i < j]
    edges += FOUR_CLIQUE_RING
    graph = WeightedDigraph.undirected(edges, n=16)

    cliques = np.repeat(np.arange(4), 4)
    delta = np.where(np.isin(cliques, (0, 2)), delta_high, delta_low)

    # C1 與 C3 的節點各自成為單點社群
    labels, next_id = [], 0
    for c in range(4):
        if c in (0, 2):
            labels += list(range(next_id, next_id + 4))
            next_id += 4
        else:
            labels += [next_id] * 4
            next_id += 1
    planted = {'M*': tuple(int(c) for c in cliques), 'M**': tuple(labels)}
    return ExampleNetwork(graph, AbsorptionConfig(delta, h), planted)


def random_strongly_connected(n: int, rng: np.random.Generator, density: float = 0.3) -> WeightedDigraph:
    """隨機強連通有向圖: 一個隨機排列的有向環加上機率為 density 的額外邊，權重在 (0, 1]"""
    A = np.where(rng.random((n, n)) < density, 1.0 - rng.random((n, n)), 0.0)
    order = rng.permutation(n)
    A[np.roll(order, -1), order] = 1.0 - rng.random(n)
    np.fill_diagonal(A, 0.0)
    return WeightedDigraph(A)


def grid_quadrants(side: int = 6) -> np.ndarray:
    """節點 r*side + c 所屬的象限 B1 (左上), B2 (右上), B3 (左下), B4 (右下)，以 0..3 表示"""
    half = side // 2
    rows, cols = np.divmod(np.arange(side * side), side)
    return (2 * (rows >= half) + (cols >= half)).astype(int)


def grid(rates: tuple[float, float, float, float] = (0.2, 0.7, 1.5, 1.7),
         h: float = 0.0,
         side: int = 6) -> ExampleNetwork:
    """side x side 四鄰接網格，各象限 B1..B4 使用 rates 中的吸收率"""
    edges = []
    for r in range(side):
        for c in range(side):
            node = r * side + c
            if c + 1 < side:
                edges.append((node, node + 1))
            if r + 1 < side:
                edges.append((node, node + side))
    graph = WeightedDigraph.undirected(edges, n=side * side)

    quadrant = grid_quadrants(side)
    delta = np.asarray(rates, dtype=float)[quadrant]

    # B1 為一個社群，其餘節點各自成為單點社群
    labels, next_id = [], 1
    for q in quadrant:
        if q == 0:
            labels.append(0)
        else:
            labels.append(next_id)
            next_id += 1
    planted = {'quadrants': tuple(int(q) for q in quadrant), 'B1_only': tuple(labels)}
    return ExampleNetwork(graph, AbsorptionConfig(delta, h), planted)
