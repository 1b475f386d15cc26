"""網路上的 SIR 連續時間精確模擬 (Gillespie direct method)"""
from dataclasses import dataclass

import numpy as np

from src.graph.digraph import WeightedDigraph
from src.epidemic.schedule import StageConfig


SUSCEPTIBLE, INFECTIOUS, RECOVERED = 0, 1, 2


@dataclass(frozen=True)
class OutbreakStats:
    duration: float   # 最後一個事件 (最後一次恢復) 的時間
    final_size: int   # 曾經被感染的節點數
    peak: int         # 同時感染的最大節點數


@dataclass(frozen=True)
class EventLog:
    """每個事件後的狀態，kind: 'infection' 或 'recovery'"""
    times: np.ndarray
    kinds: tuple[str, ...]
    nodes: np.ndarray
    S: np.ndarray
    I: np.ndarray
    R: np.ndarray


def gillespie_sir(network: WeightedDigraph,
                  stage: StageConfig,
                  seed: int | tuple[int, ...] | np.random.Generator,
                  initial: int | None = None,
                  record: bool = False) -> tuple[OutbreakStats, EventLog | None]:
    """單一感染源的 SIR 疫情

    感染節點 i 以速率 delta_i 恢復；易感節點 k 被感染的速率為 sum_i beta_i a_ki (i 為感染節點)。
    initial 為 None 時由同一個亂數產生器均勻抽取。
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    A = network.adjacency
    n = network.n
    beta, delta = stage.beta, stage.delta
    if beta.size != n or delta.size != n:
        raise ValueError(f"Stage parameters have {beta.size}/{delta.size} entries for {n} nodes")

    initial = int(rng.integers(n)) if initial is None else int(initial)
    status = np.full(n, SUSCEPTIBLE)
    status[initial] = INFECTIOUS
    force = beta[initial] * A[:, initial]

    t, n_infectious, ever, peak = 0.0, 1, 1, 1
    log = {'times': [0.0], 'kinds': ['infection'], 'nodes': [initial], 'S': [n - 1], 'I': [1], 'R': [0]} \
        if record else None

    while n_infectious > 0:
        rates = np.where(status == INFECTIOUS, delta,
                         np.where(status == SUSCEPTIBLE, np.clip(force, 0, None), 0.0))
        cumulative = np.cumsum(rates)
        total = cumulative[-1]
        t += rng.exponential(1 / total)
        node = min(int(np.searchsorted(cumulative, rng.random() * total, side='right')), n - 1)
        # 捨入誤差可能落在速率為 0 的節點上
        while rates[node] == 0:
            node -= 1

        if status[node] == INFECTIOUS:
            status[node] = RECOVERED
            force = force - beta[node] * A[:, node]
            n_infectious -= 1
            kind = 'recovery'
        else:
            status[node] = INFECTIOUS
            force = force + beta[node] * A[:, node]
            n_infectious += 1
            ever += 1
            peak = max(peak, n_infectious)
            kind = 'infection'

        if record:
            log['times'].append(t)
            log['kinds'].append(kind)
            log['nodes'].append(node)
            log['S'].append(n - ever)
            log['I'].append(n_infectious)
            log['R'].append(ever - n_infectious)

    events = None
    if record:
        events = EventLog(np.asarray(log['times']), tuple(log['kinds']), np.asarray(log['nodes']),
                          np.asarray(log['S']), np.asarray(log['I']), np.asarray(log['R']))
    return OutbreakStats(t, ever, peak), events
