"""穩態分佈、正則性檢查與正則鏈的基本矩陣 Z"""
import logging
from dataclasses import dataclass

import numpy as np
import networkx as nx
from scipy.linalg import solve, LinAlgError

from src.config.errors import NotRegular
from src.config.settings import STOCHASTIC_TOL, NEGATIVITY_TOL, STATIONARY_TOL
from src.graph.digraph import _frozen
from src.markov.transitions import TransitionMatrix


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StationaryDistribution:
    """節點上的機率向量 (pi, pi_0, N^ pi_0 等)

    只檢查非負與和為 1；P pi = pi 由 stationary() 保證。
    """
    pi: np.ndarray

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=float)
        if pi.ndim != 1:
            raise ValueError(f"Distribution must be a vector, got shape {pi.shape}")
        if np.any(pi < -NEGATIVITY_TOL):
            raise ValueError(f"Distribution has negative entries (min {pi.min():.3g})")
        if abs(pi.sum() - 1) > STOCHASTIC_TOL * max(1, pi.size):
            raise ValueError(f"Distribution sums to {pi.sum():.15g}, not 1")
        pi = np.clip(pi, 0, None)
        object.__setattr__(self, 'pi', _frozen(pi / pi.sum()))

    @classmethod
    def uniform(cls, n: int) -> 'StationaryDistribution':
        return cls(np.full(n, 1 / n))

    @property
    def n(self) -> int:
        return self.pi.size


def _matrix(P: TransitionMatrix | np.ndarray) -> np.ndarray:
    return P.matrix if isinstance(P, TransitionMatrix) else np.asarray(P, dtype=float)


def _pattern_graph(P: np.ndarray) -> nx.DiGraph:
    # p_ij > 0 代表 j -> i
    return nx.from_numpy_array((P.T > 0).astype(int), create_using=nx.DiGraph)


def is_regular(P: TransitionMatrix | np.ndarray) -> bool:
    """某個 P^k 的所有元素都為正 (primitive)

    強連通且有正對角線即為正則；否則檢查 P^k 的非零樣式，k 取 Wielandt 上界 (n-1)^2 + 1。
    """
    P = _matrix(P)
    n = P.shape[0]
    if not nx.is_strongly_connected(_pattern_graph(P)):
        return False
    if np.any(np.diag(P) > 0):
        return True

    pattern = (P > 0).astype(np.int64)
    power, exponent = pattern.copy(), 1
    while exponent < (n - 1) ** 2 + 1:
        power = np.minimum(power @ power, 1)
        exponent *= 2
    return bool(np.all(power > 0))


def stationary(P: TransitionMatrix | np.ndarray, strict: bool = False) -> StationaryDistribution:
    """解 (I - P + 1 1^T) pi = 1 求 P pi = pi, 1^T pi = 1

    預設只要求唯一的穩態分佈 (恰有一個封閉的連通類)，strict=True 時要求 P 為正則。
    """
    P = _matrix(P)
    n = P.shape[0]
    if strict and not is_regular(P):
        raise NotRegular("Transition matrix is not regular (no power of it is strictly positive)")

    closed = list(nx.attracting_components(_pattern_graph(P)))
    if len(closed) != 1:
        raise NotRegular(f"Transition matrix has {len(closed)} closed classes, the stationary distribution is not unique")

    try:
        pi = solve(np.eye(n) - P + np.ones((n, n)), np.ones(n))
    except LinAlgError as e:
        raise NotRegular(f"Stationary system is singular: {e}") from e

    residual = np.abs(P @ pi - pi).sum()
    if residual > STATIONARY_TOL or pi.min() < -STATIONARY_TOL:
        raise NotRegular(f"Stationary solve failed (residual {residual:.3g}, min entry {pi.min():.3g})")

    return StationaryDistribution(np.clip(pi, 0, None) / np.clip(pi, 0, None).sum())


def regular_fundamental(P: TransitionMatrix | np.ndarray, pi: StationaryDistribution | np.ndarray) -> np.ndarray:
    """Z = (I - P + pi 1^T)^-1，滿足 Z pi = pi 與 1^T Z = 1^T"""
    P = _matrix(P)
    pi = pi.pi if isinstance(pi, StationaryDistribution) else np.asarray(pi, dtype=float)
    n = P.shape[0]
    try:
        return solve(np.eye(n) - P + np.outer(pi, np.ones(n)), np.eye(n))
    except LinAlgError as e:
        raise NotRegular(f"I - P + pi 1^T is singular: {e}") from e
