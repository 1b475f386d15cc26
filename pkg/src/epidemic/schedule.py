"""分階段的參數配置: 每一階段提高一條社群橋兩端的恢復率，並補償晶格內的傳染率"""
import logging
from dataclasses import dataclass, field

import numpy as np

from src.config.errors import ExhaustedBridges
from src.graph.digraph import _frozen
from src.epidemic.network import RingNetwork


logger = logging.getLogger(__name__)


def beta_balancing(beta_star: float, delta_star: float, delta_sstar: float, alpha: float) -> float:
    """beta** = beta* + alpha delta* beta* (1/delta* - 1/delta**)"""
    if not (delta_sstar >= delta_star > 0 and beta_star > 0 and alpha >= 0):
        raise ValueError("Expected delta** >= delta* > 0, beta* > 0 and alpha >= 0")
    return beta_star + alpha * delta_star * beta_star * (1 / delta_star - 1 / delta_sstar)


@dataclass(frozen=True)
class StageParams:
    beta_star: float = 0.125
    delta_star: float = 0.2
    delta_sstar: float = 1.0
    alpha: float = 0.1

    @property
    def beta_sstar(self) -> float:
        return beta_balancing(self.beta_star, self.delta_star, self.delta_sstar, self.alpha)


@dataclass(frozen=True)
class BridgeUpgrade:
    bridge: tuple[int, int]      # (i1, i2)，兩端恢復率改為 delta**
    balancing: tuple[int, int]   # (l1, l2)，傳染率改為 beta**


@dataclass(frozen=True)
class StageConfig:
    stage_index: int                                  # 從 1 開始
    beta: np.ndarray
    delta: np.ndarray
    bridge_log: tuple[BridgeUpgrade, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'beta', _frozen(self.beta))
        object.__setattr__(self, 'delta', _frozen(self.delta))

    def to_dict(self) -> dict:
        return {
            'stage': self.stage_index,
            'bridges': [list(upgrade.bridge) for upgrade in self.bridge_log],
            'balancing': [list(upgrade.balancing) for upgrade in self.bridge_log],
        }


def _balancing_node(network: RingNetwork, node: int, rng: np.random.Generator) -> int:
    """同一晶格、不是 node 本身、也不與 node 相鄰的節點 (晶格鄰居與同晶格的橋接鄰居都排除)"""
    excluded = network.neighbors(node) | network.lattice_neighbors(node) | {node}
    candidates = [int(i) for i in network.members(network.lattice_of[node]) if i not in excluded]
    if not candidates:
        raise ExhaustedBridges(f"No balancing node available for bridging node {node}")
    return candidates[rng.integers(len(candidates))]


def stage_schedule(network: RingNetwork, params: StageParams, N_s: int, seed: int) -> list[StageConfig]:
    """階段 1 為均勻參數，之後每一階段隨機選一條跨晶格且兩端仍為 delta* 的橋"""
    if N_s < 1:
        raise ValueError(f"N_s must be >= 1, got {N_s}")

    rng = np.random.default_rng((seed, 1))
    n = network.graph.n
    beta = np.full(n, params.beta_star)
    delta = np.full(n, params.delta_star)
    beta_sstar = params.beta_sstar

    stages = [StageConfig(1, beta, delta)]
    log: list[BridgeUpgrade] = []
    for stage in range(2, N_s + 1):
        eligible = [(i, j) for i, j in network.bridges
                    if network.lattice_of[i] != network.lattice_of[j]
                    and delta[i] == params.delta_star and delta[j] == params.delta_star]
        if not eligible:
            raise ExhaustedBridges(f"No eligible community bridge left for stage {stage} of {N_s}")

        i1, i2 = eligible[rng.integers(len(eligible))]
        l1, l2 = _balancing_node(network, i1, rng), _balancing_node(network, i2, rng)
        delta = delta.copy()
        beta = beta.copy()
        delta[[i1, i2]] = params.delta_sstar
        beta[[l1, l2]] = beta_sstar

        log.append(BridgeUpgrade((i1, i2), (l1, l2)))
        stages.append(StageConfig(stage, beta, delta, tuple(log)))

    logger.info(f"建立 {N_s} 個階段, beta** = {beta_sstar:.6g}")
    return stages
