"""與吸收尺度圖相關的吸收馬可夫鏈

P~ = [[Q, 0], [r^T, 1]]，Q = A (W + D_delta)^-1，r_i = delta_i / (omega_i + delta_i)。
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve, LinAlgError

from src.config.catalog import TransitionKind
from src.config.errors import NonConvergent
from src.config.settings import STOCHASTIC_TOL
from src.graph.digraph import WeightedDigraph, AbsorptionConfig, _frozen, out_degrees
from src.markov.transitions import TransitionMatrix
from src.markov.stationary import StationaryDistribution


logger = logging.getLogger(__name__)


def _delta_vector(delta: np.ndarray | AbsorptionConfig, n: int) -> np.ndarray:
    if isinstance(delta, AbsorptionConfig):
        delta = delta.delta
    delta = np.broadcast_to(np.asarray(delta, dtype=float), (n,))
    if np.any(~np.isfinite(delta)) or np.any(delta <= 0):
        raise ValueError("Node-absorption rates must be strictly positive")
    return delta


@dataclass(frozen=True)
class AbsorbingChain:
    """Q 的欄和加上 r_j 等於 1"""
    Q: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        r = np.asarray(self.r, dtype=float)
        if Q.shape != (r.size, r.size):
            raise ValueError(f"Q has shape {Q.shape} but r has {r.size} entries")
        deviation = np.abs(Q.sum(axis=0) + r - 1).max(initial=0)
        if deviation > STOCHASTIC_TOL:
            raise ValueError(f"Columns of [Q; r^T] do not sum to 1 (max deviation {deviation:.3g})")
        object.__setattr__(self, 'Q', _frozen(Q))
        object.__setattr__(self, 'r', _frozen(r))

    @property
    def n(self) -> int:
        return self.r.size


@dataclass(frozen=True)
class FundamentalMatrix:
    """N = (I - Q)^-1，t = N^T 1 (被吸收前的期望步數)，N^ = N diag{t}^-1"""
    N: np.ndarray
    t_vec: np.ndarray
    N_hat: np.ndarray


def absorbing_chain(g: WeightedDigraph, delta: np.ndarray | AbsorptionConfig) -> AbsorbingChain:
    delta = _delta_vector(delta, g.n)
    total = out_degrees(g) + delta
    return AbsorbingChain(g.adjacency / total[np.newaxis, :], delta / total)


def fundamental(chain: AbsorbingChain) -> FundamentalMatrix:
    """N = sum_k Q^k = (I - Q)^-1"""
    I = np.eye(chain.n)
    radius = np.abs(np.linalg.eigvals(chain.Q)).max(initial=0)
    if radius >= 1 - 1e-14:
        raise NonConvergent(f"Spectral radius of Q is {radius:.15g}; I - Q is numerically singular")

    try:
        N = solve(I - chain.Q, I)
    except LinAlgError as e:
        raise NonConvergent(f"I - Q is singular: {e}") from e

    t_vec = N.sum(axis=0)
    return FundamentalMatrix(_frozen(N), _frozen(t_vec), _frozen(N / t_vec[np.newaxis, :]))


def pi_delta_abs(fund: FundamentalMatrix, pi0: StationaryDistribution | np.ndarray) -> StationaryDistribution:
    """N^ pi_0: 第 i 個元素為被吸收前最後停留在節點 i 的機率"""
    pi0 = pi0.pi if isinstance(pi0, StationaryDistribution) else np.asarray(pi0, dtype=float)
    if pi0.size != fund.N_hat.shape[0]:
        raise ValueError(f"pi_0 has {pi0.size} entries but the chain has {fund.N_hat.shape[0]} nodes")
    return StationaryDistribution(fund.N_hat @ pi0)


def chain_from_p_delta(P_delta: TransitionMatrix) -> AbsorbingChain:
    """由 P_delta = D_r + Q 拆回吸收鏈 (自我轉移即吸收)"""
    if P_delta.kind != TransitionKind.P_DELTA:
        raise ValueError(f"Expected a P_delta transition matrix, got kind '{P_delta.kind.value}'")
    r = np.diag(P_delta.matrix).copy()
    return AbsorbingChain(P_delta.matrix - np.diag(r), r)


def self_transition_times(P_delta: TransitionMatrix) -> np.ndarray:
    """theta^T = 1^T N: 由各節點出發，直到第一次自我轉移為止的期望步數"""
    return fundamental(chain_from_p_delta(P_delta)).t_vec.copy()
