"""吸收尺度隨機漫步的轉移矩陣 P_l, P_e, P_delta 與 A W^-1"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from src.config.catalog import TransitionKind
from src.config.errors import InfeasibleMarkovTime, NegativeTransition
from src.config.settings import STOCHASTIC_TOL, NEGATIVITY_TOL, FEASIBILITY_TOL
from src.graph.digraph import WeightedDigraph, AbsorptionConfig, _frozen, out_degrees, scaled_rate_vector, \
    scaled_laplacian


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TransitionMatrix:
    """欄隨機矩陣 (每一欄和為 1，元素非負) 與其來源

    Parameters
    ----------
    matrix : ndarray, shape (n, n)
        p_ij = 由 j 走到 i 的機率
    kind : TransitionKind
        LINEAR / EXPONENTIAL / P_DELTA / RAW
    markov_time : float | None
        P_l 與 P_e 的 Markov time
    """
    matrix: np.ndarray
    kind: TransitionKind = TransitionKind.RAW
    markov_time: float | None = None

    def __post_init__(self):
        P = np.asarray(self.matrix, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError(f"Transition matrix must be square, got shape {P.shape}")
        if np.any(P < -NEGATIVITY_TOL):
            raise ValueError(f"Transition matrix has negative entries (min {P.min():.3g})")
        deviation = np.abs(P.sum(axis=0) - 1).max(initial=0)
        if deviation > STOCHASTIC_TOL:
            raise ValueError(f"Transition matrix is not column-stochastic (max |column sum - 1| = {deviation:.3g})")
        object.__setattr__(self, 'kind', TransitionKind(self.kind))
        object.__setattr__(self, 'matrix', _frozen(np.clip(P, 0, None)))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        return self.matrix @ other


def feasibility_bound(g: WeightedDigraph, cfg: AbsorptionConfig) -> float:
    """P_l 非負所需的上界 1 / max_i {omega_i / (h_i omega_i + delta_i)}"""
    ratio = out_degrees(g) / scaled_rate_vector(g, cfg).d_s
    peak = ratio.max(initial=0)
    return np.inf if peak == 0 else 1 / peak


def transition_linear(g: WeightedDigraph, cfg: AbsorptionConfig, t: float) -> TransitionMatrix:
    """P_l(D_delta, H, t) = I - t L~(D_delta, H)

    上界為閉區間: t max_i omega_i / (h_i omega_i + delta_i) <= 1，此時對角線可以恰為 0。
    """
    if t <= 0:
        raise ValueError(f"Markov time must be positive, got {t}")
    bound = feasibility_bound(g, cfg)
    if t > bound * (1 + FEASIBILITY_TOL):
        raise InfeasibleMarkovTime(t, bound)

    # 上界處對角線的捨入負值由 TransitionMatrix 歸零
    P = np.eye(g.n) - t * scaled_laplacian(g, cfg)
    return TransitionMatrix(P, TransitionKind.LINEAR, float(t))


def transition_exponential(g: WeightedDigraph, cfg: AbsorptionConfig, t: float) -> TransitionMatrix:
    """P_e(D_delta, H, t) = exp(-t L~(D_delta, H))，以 scipy 的 scaling and squaring 計算"""
    if t <= 0:
        raise ValueError(f"Markov time must be positive, got {t}")

    P = expm(-t * scaled_laplacian(g, cfg))
    if P.min(initial=0) < -NEGATIVITY_TOL:
        raise NegativeTransition(f"Matrix exponential at t={t:.6g} has entries down to {P.min():.3g}")

    # 捨入誤差: 負值歸零後重新正規化各欄
    P = np.clip(P, 0, None)
    P /= P.sum(axis=0, keepdims=True)
    return TransitionMatrix(P, TransitionKind.EXPONENTIAL, float(t))


def p_delta(g: WeightedDigraph, delta: np.ndarray | AbsorptionConfig) -> TransitionMatrix:
    """P_delta = P_l(D_delta, I, 1) = D_r + Q，對角線為自我轉移 (吸收) 機率"""
    delta = delta.delta if isinstance(delta, AbsorptionConfig) else delta
    linear = transition_linear(g, AbsorptionConfig(delta, 1.0), 1.0)
    return TransitionMatrix(linear.matrix, TransitionKind.P_DELTA, 1.0)


def raw_transition(g: WeightedDigraph) -> TransitionMatrix:
    """標準 InfoMap 的輸入 A W^-1"""
    g.require_walkable()
    return TransitionMatrix(g.adjacency / out_degrees(g)[np.newaxis, :], TransitionKind.RAW)


def build_transition(g: WeightedDigraph,
                     cfg: AbsorptionConfig,
                     kind: TransitionKind | str,
                     t: float | None = None) -> TransitionMatrix:
    """依 kind 分派到對應的建構函數"""
    kind = TransitionKind(kind)
    match kind:
        case TransitionKind.LINEAR:
            return transition_linear(g, cfg, t)
        case TransitionKind.EXPONENTIAL:
            return transition_exponential(g, cfg, t)
        case TransitionKind.P_DELTA:
            return p_delta(g, cfg)
        case TransitionKind.RAW:
            return raw_transition(g)
