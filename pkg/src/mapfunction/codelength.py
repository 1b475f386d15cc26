"""Map function L(M, P, pi) 與吸收漫步的 L^(a)

流量 F_kj = p_kj pi_j 為由 j 流向 k 的機率流，社群 i 的
    q_exit_i  = sum_{j in M_i, k not in M_i} F_kj
    q_enter_i = sum_{k in M_i, j not in M_i} F_kj
    p_circ_i  = q_exit_i + sum_{j in M_i} pi_j
L = q_enter H(Q) + sum_i p_circ_i H(P^i)。
"""
import logging
from dataclasses import dataclass, asdict
import json
from pathlib import Path

import numpy as np

from src.config.settings import STOCHASTIC_TOL
from src.graph.digraph import WeightedDigraph, AbsorptionConfig, out_degrees
from src.markov import (
    TransitionMatrix,
    StationaryDistribution,
    stationary,
    raw_transition,
    p_delta,
    absorbing_chain,
    fundamental,
    pi_delta_abs,
)
from src.mapfunction.partition import Partition


logger = logging.getLogger(__name__)


def plogp(x: np.ndarray | float) -> np.ndarray | float:
    """x log2 x，0 log 0 = 0"""
    x = np.asarray(x, dtype=float)
    positive = x > 0
    out = np.where(positive, x * np.log2(np.where(positive, x, 1.0)), 0.0)
    return out if out.ndim else float(out)


def entropy(p: np.ndarray) -> float:
    """H(p) = -sum p_i log2 p_i (bits)

    和在 1 附近的捨入誤差 (<= 1e-12) 會先正規化。
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError(f"Entropy of a vector with negative entries (min {p.min():.3g})")
    total = p.sum()
    if total > 1 + STOCHASTIC_TOL:
        raise ValueError(f"Entropy input sums to {total:.15g} > 1")
    if abs(total - 1) <= STOCHASTIC_TOL:
        p = p / total
    return float(max(-plogp(p).sum(), 0.0))


@dataclass(frozen=True)
class CodelengthBreakdown:
    q_exit: np.ndarray            # 每個社群的 q_{i exit}
    q_enter: np.ndarray           # 每個社群的 q_{i enter}
    q_enter_total: float          # q_enter = sum_i q_{i enter}
    p_circ: np.ndarray            # 每個社群的 p^i_circ
    index_entropy: float          # H(Q)
    module_entropies: np.ndarray  # H(P^i)
    total: float                  # L

    def to_dict(self) -> dict:
        return {key: value.tolist() if isinstance(value, np.ndarray) else float(value)
                for key, value in asdict(self).items()}

    def to_json(self, path: str | Path):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def from_json(cls, path: str | Path) -> 'CodelengthBreakdown':
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
        return cls(**{key: np.asarray(value) if isinstance(value, list) else value for key, value in data.items()})


def flow_matrix(P: TransitionMatrix | np.ndarray, pi: StationaryDistribution | np.ndarray) -> np.ndarray:
    """F_kj = p_kj pi_j"""
    P = P.matrix if isinstance(P, TransitionMatrix) else np.asarray(P, dtype=float)
    pi = pi.pi if isinstance(pi, StationaryDistribution) else np.asarray(pi, dtype=float)
    return P * pi[np.newaxis, :]


def community_flows(F: np.ndarray, labels: np.ndarray, m: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """社群間流量 M^T F M 的離開/進入量 (對角線為社群內部流量，不計入)"""
    labels = np.asarray(labels, dtype=int)
    m = labels.max() + 1 if m is None else m
    M = np.zeros((labels.size, m))
    M[np.arange(labels.size), labels] = 1.0
    C = M.T @ F @ M
    internal = np.diag(C)
    return C.sum(axis=0) - internal, C.sum(axis=1) - internal


def map_function(M: Partition, P: TransitionMatrix | np.ndarray, pi: StationaryDistribution | np.ndarray) -> CodelengthBreakdown:
    """L(M, P, pi)，pi 不必是 P 的穩態分佈"""
    pi = pi.pi if isinstance(pi, StationaryDistribution) else np.asarray(pi, dtype=float)
    P = P.matrix if isinstance(P, TransitionMatrix) else np.asarray(P, dtype=float)
    if not (P.shape == (M.n, M.n) and pi.size == M.n):
        raise ValueError(f"Dimension mismatch: partition of {M.n} nodes, P {P.shape}, pi {pi.shape}")

    q_exit, q_enter = community_flows(flow_matrix(P, pi), M.array, M.m)
    q_exit = np.clip(q_exit, 0, None)
    q_enter = np.clip(q_enter, 0, None)
    volume = np.bincount(M.array, weights=pi, minlength=M.m)
    p_circ = q_exit + volume
    q_total = float(q_enter.sum())

    # 0 log 0 = 0: q_enter = 0 時 index 項為 0
    index_entropy = entropy(q_enter / q_total) if q_total > 0 else 0.0

    module_entropies = np.zeros(M.m)
    for i, members in enumerate(M.communities()):
        if p_circ[i] > 0:
            visits = np.concatenate(([q_exit[i]], pi[sorted(members)]))
            module_entropies[i] = entropy(visits / p_circ[i])

    total = q_total * index_entropy + float(p_circ @ module_entropies)
    return CodelengthBreakdown(q_exit, q_enter, q_total, p_circ, index_entropy, module_entropies, total)


def standard_map(M: Partition, P: TransitionMatrix) -> CodelengthBreakdown:
    """L(M, P) = L(M, P, pi)，pi 為 P 的穩態分佈"""
    return map_function(M, P, stationary(P))


def adjacency_map(M: Partition, g: WeightedDigraph) -> CodelengthBreakdown:
    """L(M) = L(M, A W^-1)"""
    return standard_map(M, raw_transition(g))


def absorbing_map(M: Partition,
                  g: WeightedDigraph,
                  delta: np.ndarray | AbsorptionConfig,
                  pi0: StationaryDistribution | np.ndarray | None = None) -> CodelengthBreakdown:
    """L^(a)(M, A, delta, pi_0) = L(M, P_delta, N^ pi_0)，pi_0 預設為均勻分佈"""
    pi0 = StationaryDistribution.uniform(g.n) if pi0 is None else pi0
    fund = fundamental(absorbing_chain(g, delta))
    return map_function(M, p_delta(g, delta), pi_delta_abs(fund, pi0))


def pi0_for_equivalence(g: WeightedDigraph, delta: np.ndarray | AbsorptionConfig) -> StationaryDistribution:
    """使 L(M, P_delta) = L^(a)(M, A, delta, pi_0) 對所有 M 成立的 pi_0

    (pi_0)_i = (pi^(na))_i t_i delta_i / (omega_i + delta_i)，pi^(na) 為 P_delta 的穩態分佈。
    """
    delta = delta.delta if isinstance(delta, AbsorptionConfig) else np.broadcast_to(np.asarray(delta, float), (g.n,))
    chain = absorbing_chain(g, delta)
    pi_na = stationary(p_delta(g, delta)).pi
    pi0 = pi_na * fundamental(chain).t_vec * delta / (out_degrees(g) + delta)
    return StationaryDistribution(pi0)
