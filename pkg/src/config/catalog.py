from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Literal, TypeAlias


ExperimentName = Literal['threenode-la', 'threenode-l', 'fourclique-sweep', 'grid-sweep', 'grid-partition',
                         'sir-stages', 'sir-communities', 'identities', 'custom']
SweepKind = Literal['linear', 'exponential']
Labels: TypeAlias = tuple[int, ...]


class TransitionKind(str, Enum):
    """轉移矩陣的來源

    Available kinds:
        - LINEAR      : P_l(D_delta, H, t) = I - t L~(D_delta, H)
        - EXPONENTIAL : P_e(D_delta, H, t) = exp(-t L~(D_delta, H))
        - P_DELTA     : P_delta = P_l(D_delta, I, 1) = D_r + Q
        - RAW         : 使用者給定的矩陣，或 A W^-1
    """
    LINEAR = 'linear'
    EXPONENTIAL = 'exponential'
    P_DELTA = 'p_delta'
    RAW = 'raw'


@dataclass(frozen=True)
class ExperimentConfig:
    """實驗配置"""
    display_name: str                  # 顯示名稱
    description: str                   # 對應的結果
    outputs: tuple[str, ...]           # 輸出的 CSV 檔名
    defaults: dict[str, Any] = field(default_factory=dict)  # 預設參數


# 環形晶格網路的共用參數
_RING_LATTICE_DEFAULTS = {
    'n_ws': 12,
    'N_ws': 20,
    'k_ws': 6,
    'N_s': 68,
    'beta_star': 0.125,
    'delta_star': 0.2,
    'delta_sstar': 1.0,
    'alpha': 0.1,
}


EXPERIMENT_CONFIGS: dict[str, ExperimentConfig] = {
    'threenode-la': ExperimentConfig(
        display_name='Three-node L^(a)',
        description='L^(a)(M, A, delta, pi_0) of all five partitions against delta_2, uniform pi_0',
        outputs=('threenode_la.csv',),
        defaults={'delta_1': 0.1, 'delta_3': 0.1, 'delta2_min': 0.1, 'delta2_max': 10.0, 'points': 50},
    ),
    'threenode-l': ExperimentConfig(
        display_name='Three-node L(M, P_l)',
        description='L(M, P_l(D_delta, 0, 1/20)) of all five partitions against delta_2',
        outputs=('threenode_l.csv',),
        defaults={'delta_1': 0.1, 'delta_3': 0.1, 'delta2_min': 0.1, 'delta2_max': 1.0, 'points': 50, 't': 0.05},
    ),
    'fourclique-sweep': ExperimentConfig(
        display_name='Four-clique Markov-time sweeps',
        description='Community counts for P_l and P_e with H = 0 and H = (3/2) I',
        outputs=('fourclique_sweep.csv',),
        defaults={'delta_high': 7.0, 'delta_low': 1.0, 'h_values': (0.0, 1.5), 'linear_points': 40,
                  'exp_t_min': 0.1, 'exp_t_max': 16.0, 'exp_points': 80, 'restarts': 20},
    ),
    'grid-sweep': ExperimentConfig(
        display_name='Grid Markov-time sweeps',
        description='Community counts for P_l(D_delta, 0, t) and P_e(D_delta, I, t) on the 6x6 grid',
        outputs=('grid_sweep.csv',),
        defaults={'rates': (0.2, 0.7, 1.5, 1.7), 'linear_t_min': 0.01, 'linear_t_max': 0.05, 'linear_points': 41,
                  'exp_h': 1.0, 'exp_t_min': 0.5, 'exp_t_max': 10.0, 'exp_points': 39, 'restarts': 20},
    ),
    'grid-partition': ExperimentConfig(
        display_name='Grid partitions',
        description='Partitions of the grid at P_l(D_delta, 0, 0.04) and P_e(D_delta, I, 5.25)',
        outputs=('grid_partition.csv',),
        defaults={'rates': (0.2, 0.7, 1.5, 1.7), 'linear_t': 0.04, 'exp_t': 5.25, 'exp_h': 1.0, 'restarts': 20},
    ),
    'sir-stages': ExperimentConfig(
        display_name='Staged SIR outbreaks',
        description='Mean outbreak duration, final size and peak per absorption stage',
        outputs=('sir_stages.csv', 'sir_runs.csv'),
        defaults={**_RING_LATTICE_DEFAULTS, 'n_sim': 1000, 'per_run': False},
    ),
    'sir-communities': ExperimentConfig(
        display_name='Effective communities of one ring lattice',
        description='Community and subcommunity counts under P_e(D_delta, 0, t) at three stages',
        outputs=('sir_communities.csv',),
        defaults={**_RING_LATTICE_DEFAULTS, 'stages': (1, 29, 68), 'planted': 4,
                  't_min': 0.01, 't_max': 0.05, 'points': 17, 'restarts': 5},
    ),
    'identities': ExperimentConfig(
        display_name='Absorption-inverse identities',
        description='Residuals of the fundamental-matrix and absorption-inverse identities',
        outputs=('identities.csv',),
        defaults={'trials': 100, 'n_min': 3, 'n_max': 10, 'delta_min': 1e-3, 'delta_max': 10.0},
    ),
    'custom': ExperimentConfig(
        display_name='Custom sweep',
        description='Markov-time sweep on a user supplied edge list and node-attribute file',
        outputs=('custom_sweep.csv',),
        defaults={'input': None, 'delta': None, 'h': '0', 'kind': 'exponential',
                  't_min': 0.1, 't_max': 4.0, 'points': 20, 'restarts': 20},
    ),
}
