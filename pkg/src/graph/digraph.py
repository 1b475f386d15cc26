"""有向加權圖、拉普拉斯矩陣與吸收尺度圖

所有矩陣採用欄慣例: a_ij 為節點 j -> 節點 i 的邊權重，
因此 out-degree 為欄和 omega_j = sum_i a_ij。
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import networkx as nx


logger = logging.getLogger(__name__)


def _frozen(array, dtype=float) -> np.ndarray:
    """複製成唯讀的 float64 陣列"""
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class WeightedDigraph:
    """有向加權圖 (欄慣例)

    Parameters
    ----------
    adjacency : ndarray, shape (n, n)
        a_ij = 邊 j -> i 的權重，所有元素非負
    allow_self_edges : bool
        只有內部產生的矩陣 (例如 P_l 的自環) 才允許對角線非零
    """
    adjacency: np.ndarray
    allow_self_edges: bool = False

    def __post_init__(self):
        A = np.asarray(self.adjacency, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"Adjacency matrix must be square, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("Adjacency matrix contains non-finite entries")
        if np.any(A < 0):
            raise ValueError("Adjacency matrix has negative edge weights")
        if not self.allow_self_edges and np.any(np.diag(A) != 0):
            nodes = np.flatnonzero(np.diag(A))
            raise ValueError(f"Self-edges are not allowed in input graphs (a_ii != 0 at nodes {nodes.tolist()})")
        object.__setattr__(self, 'adjacency', _frozen(A))

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def out_degrees(self) -> np.ndarray:
        return out_degrees(self)

    @property
    def laplacian(self) -> np.ndarray:
        """L = W - A"""
        return np.diag(self.out_degrees) - self.adjacency

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int, float]], n: int | None = None) -> 'WeightedDigraph':
        """由 (src, dst, weight) 邊列表建立，src -> dst 放在 a[dst, src]"""
        edges = [(int(s), int(d), float(w)) for s, d, w in edges]
        if n is None:
            n = 1 + max((max(s, d) for s, d, _ in edges), default=-1)
        A = np.zeros((n, n))
        for src, dst, weight in edges:
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"Edge ({src}, {dst}) is outside the node range 0..{n - 1}")
            A[dst, src] += weight
        return cls(A)

    @classmethod
    def undirected(cls, edges: Iterable[tuple[int, int]], n: int, weight: float = 1.0) -> 'WeightedDigraph':
        """每條邊雙向加入，權重相同"""
        A = np.zeros((n, n))
        for i, j in edges:
            A[i, j] = A[j, i] = weight
        return cls(A)

    def edges(self) -> list[tuple[int, int, float]]:
        """(src, dst, weight) 列表，依 src 再 dst 排序"""
        dst, src = np.nonzero(self.adjacency)
        order = np.lexsort((dst, src))
        return [(int(src[k]), int(dst[k]), float(self.adjacency[dst[k], src[k]])) for k in order]

    def to_networkx(self) -> nx.DiGraph:
        # networkx 使用列慣例 (i -> j 在 [i, j])，所以轉置
        return nx.from_numpy_array(self.adjacency.T, create_using=nx.DiGraph)

    def require_walkable(self):
        """隨機漫步需要每個節點 out-degree > 0"""
        dangling = np.flatnonzero(self.out_degrees <= 0)
        if dangling.size:
            raise ValueError(f"Dangling nodes without out-edges: {dangling.tolist()}")


@dataclass(frozen=True)
class AbsorptionConfig:
    """節點吸收率 delta 與對角尺度 H = diag{h}"""
    delta: np.ndarray
    h: np.ndarray = None

    def __post_init__(self):
        delta = np.atleast_1d(np.asarray(self.delta, dtype=float))
        h = np.zeros_like(delta) if self.h is None else np.asarray(self.h, dtype=float)
        if h.ndim == 0:
            h = np.full_like(delta, float(h))
        if delta.ndim != 1 or h.shape != delta.shape:
            raise ValueError(f"delta and h must be vectors of the same length, got {delta.shape} and {h.shape}")
        if np.any(~np.isfinite(delta)) or np.any(delta <= 0):
            raise ValueError("Node-absorption rates must be strictly positive")
        if np.any(~np.isfinite(h)) or np.any(h < 0):
            raise ValueError("Scalings h must be non-negative")
        object.__setattr__(self, 'delta', _frozen(delta))
        object.__setattr__(self, 'h', _frozen(h))

    @property
    def n(self) -> int:
        return self.delta.size

    @property
    def D(self) -> np.ndarray:
        return np.diag(self.delta)

    @property
    def H(self) -> np.ndarray:
        return np.diag(self.h)

    def with_h(self, h: float | np.ndarray) -> 'AbsorptionConfig':
        return AbsorptionConfig(self.delta, h)

    def scaled(self, factor: float) -> 'AbsorptionConfig':
        """delta 乘上 factor，h 不變"""
        return AbsorptionConfig(self.delta * factor, self.h)


@dataclass(frozen=True)
class ScaledRateVector:
    """(d_s)_i = h_i omega_i + delta_i"""
    d_s: np.ndarray

    def __post_init__(self):
        d_s = np.asarray(self.d_s, dtype=float)
        if np.any(d_s <= 0):
            raise ValueError("Scaled rates must be strictly positive")
        object.__setattr__(self, 'd_s', _frozen(d_s))


@dataclass(frozen=True)
class AbsorptionScaledGraph:
    """吸收尺度圖，鄰接矩陣 A~ = A D^-1，D = diag{d_s}"""
    base: WeightedDigraph
    rates: ScaledRateVector
    adjacency: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.rates.d_s.size != self.base.n:
            raise ValueError(f"Rate vector length {self.rates.d_s.size} does not match {self.base.n} nodes")
        object.__setattr__(self, 'adjacency', _frozen(self.base.adjacency / self.rates.d_s[np.newaxis, :]))

    @property
    def laplacian(self) -> np.ndarray:
        """(W - A) D^-1"""
        return self.base.laplacian / self.rates.d_s[np.newaxis, :]


def _check_dimensions(g: WeightedDigraph, cfg: AbsorptionConfig):
    if cfg.n != g.n:
        raise ValueError(f"Absorption configuration has {cfg.n} entries but the graph has {g.n} nodes")


def out_degrees(g: WeightedDigraph) -> np.ndarray:
    """omega_j = sum_i a_ij"""
    return g.adjacency.sum(axis=0)


def scaled_rate_vector(g: WeightedDigraph, cfg: AbsorptionConfig) -> ScaledRateVector:
    """HW + D_delta 的對角線"""
    _check_dimensions(g, cfg)
    return ScaledRateVector(cfg.h * out_degrees(g) + cfg.delta)


def absorption_scaled_graph(g: WeightedDigraph, cfg: AbsorptionConfig) -> AbsorptionScaledGraph:
    return AbsorptionScaledGraph(g, scaled_rate_vector(g, cfg))


def scaled_laplacian(g: WeightedDigraph, cfg: AbsorptionConfig) -> np.ndarray:
    """L~(D_delta, H) = (W - A)(HW + D_delta)^-1"""
    return absorption_scaled_graph(g, cfg).laplacian


def absorption_leak(g: WeightedDigraph, cfg: AbsorptionConfig) -> np.ndarray:
    """delta_j / (h_j omega_j + delta_j)，即 L~ + D_delta (HW + D_delta)^-1 的欄和"""
    return cfg.delta / scaled_rate_vector(g, cfg).d_s


def is_strongly_connected(g: WeightedDigraph) -> bool:
    if g.n == 0:
        return False
    return nx.is_strongly_connected(g.to_networkx())
