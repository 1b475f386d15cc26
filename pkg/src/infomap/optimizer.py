"""Map function 的貪婪最小化 (Louvain 式的節點移動與社群聚合，加上 fine tune 與 coarse tune)"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from src.config.settings import DEFAULT_RESTARTS, DEFAULT_MAX_PASSES, DEFAULT_MOVE_TOL, DEFAULT_SEED, MAX_WORKERS
from src.markov import TransitionMatrix, StationaryDistribution
from src.mapfunction import Partition, plogp, flow_matrix, map_function


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerConfig:
    """貪婪最佳化器的參數

    Parameters
    ----------
    restarts : int
        隨機節點順序的重新開始次數
    rng_seed : int
        第 i 次重新開始使用 default_rng((rng_seed, i))
    max_outer_passes : int
        每一層節點移動的最大輪數
    tolerance : float
        接受移動所需的最小 codelength 改善量
    """
    restarts: int = DEFAULT_RESTARTS
    rng_seed: int = DEFAULT_SEED
    max_outer_passes: int = DEFAULT_MAX_PASSES
    tolerance: float = DEFAULT_MOVE_TOL
    max_workers: int = MAX_WORKERS

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_outer_passes < 1:
            raise ValueError(f"max_outer_passes must be >= 1, got {self.max_outer_passes}")
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be non-negative, got {self.tolerance}")


@dataclass(frozen=True)
class OptimizationResult:
    partition: Partition
    codelength: float
    restart: int | None                              # None: 全部一群或全部單點的候選較佳
    history: tuple[float, ...] = field(default=())   # 每輪節點移動後的 codelength


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    return np.asarray(Partition(tuple(int(x) for x in labels)).labels)


def module_flows(F: np.ndarray, volume: np.ndarray, labels: np.ndarray,
                 size: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """各社群的離開流量、進入流量與訪問率 (社群內部的流量不計)"""
    size = labels.max() + 1 if size is None else size
    M = np.zeros((labels.size, size))
    M[np.arange(labels.size), labels] = 1.0
    Fm = M.T @ F @ M
    internal = np.diag(Fm)
    return Fm.sum(axis=0) - internal, Fm.sum(axis=1) - internal, M.T @ volume


def _codelength(exit: np.ndarray, enter: np.ndarray, vol: np.ndarray, constant: float) -> float:
    return float(plogp(enter.sum()) - plogp(enter).sum() - plogp(exit).sum()
                 + plogp(exit + vol).sum() + constant)


def _aggregate(F: np.ndarray, volume: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    M = np.zeros((labels.size, labels.max() + 1))
    M[np.arange(labels.size), labels] = 1.0
    return M.T @ F @ M, M.T @ volume


class _Level:
    """單一層的節點移動

    節點為上一層的社群 (supernode)，F 的對角線 (內部流量) 不影響 codelength。
    """

    def __init__(self, F: np.ndarray, volume: np.ndarray, order: np.ndarray, constant: float,
                 max_passes: int, tolerance: float, initial: np.ndarray | None = None):
        self.F = F.copy()
        np.fill_diagonal(self.F, 0.0)
        self.volume = volume
        self.order = order
        self.constant = constant
        self.tolerance = tolerance

        n = volume.size
        self.labels = np.arange(n) if initial is None else np.asarray(canonical_labels(initial))
        self.size = np.bincount(self.labels, minlength=n)
        self.exit, self.enter, self.vol = module_flows(self.F, volume, self.labels, n)
        self.enter_total = self.enter.sum()

        self.history: list[float] = []
        for _ in range(max_passes):
            if not self._pass():
                break

    def codelength(self) -> float:
        return _codelength(self.exit, self.enter, self.vol, self.constant)

    def _pass(self) -> bool:
        moved = False
        for v in self.order:
            moved |= self._move(v)
        self.history.append(self.codelength())
        return moved

    def _move(self, v: int) -> bool:
        a = self.labels[v]
        n = self.labels.size

        out_col = self.F[:, v]
        in_row = self.F[v, :]
        out_v = np.bincount(self.labels, weights=out_col, minlength=n)
        in_v = np.bincount(self.labels, weights=in_row, minlength=n)
        out_total, in_total = out_col.sum(), in_row.sum()
        vol_v = self.volume[v]

        # 離開社群 a
        exit_a = self.exit[a] - (out_total - out_v[a]) + in_v[a]
        enter_a = self.enter[a] - (in_total - in_v[a]) + out_v[a]
        vol_a = self.vol[a] - vol_v

        # 候選社群: 有流量往來的鄰近社群，以及 (a 不只 v 一個成員時) 一個空社群
        candidates = np.flatnonzero((out_v > 0) | (in_v > 0))
        candidates = candidates[(candidates != a) & (self.size[candidates] > 0)]
        if self.size[a] > 1:
            empty = np.flatnonzero(self.size == 0)
            if empty.size:
                candidates = np.sort(np.append(candidates, empty[0]))
        if candidates.size == 0:
            return False

        exit_b = self.exit[candidates] - in_v[candidates] + (out_total - out_v[candidates])
        enter_b = self.enter[candidates] - out_v[candidates] + (in_total - in_v[candidates])
        vol_b = self.vol[candidates] + vol_v

        enter_total = self.enter_total + (enter_a - self.enter[a]) + (enter_b - self.enter[candidates])
        delta = (plogp(enter_total) - plogp(self.enter_total)
                 - (plogp(enter_a) - plogp(self.enter[a])) - (plogp(enter_b) - plogp(self.enter[candidates]))
                 - (plogp(exit_a) - plogp(self.exit[a])) - (plogp(exit_b) - plogp(self.exit[candidates]))
                 + (plogp(exit_a + vol_a) - plogp(self.exit[a] + self.vol[a]))
                 + (plogp(exit_b + vol_b) - plogp(self.exit[candidates] + self.vol[candidates])))

        # 平手時取編號最小的社群
        best = int(np.argmin(delta))
        if delta[best] >= -self.tolerance:
            return False

        b = candidates[best]
        self.exit[a], self.enter[a], self.vol[a] = exit_a, enter_a, vol_a
        self.exit[b], self.enter[b], self.vol[b] = exit_b[best], enter_b[best], vol_b[best]
        self.enter_total = enter_total[best]
        self.size[a] -= 1
        self.size[b] += 1
        self.labels[v] = b
        if self.size[a] == 0:
            self.exit[a] = self.enter[a] = self.vol[a] = 0.0
        return True

    def get_partition(self) -> np.ndarray:
        """標準化後的社群標籤 (0..m-1)"""
        return np.asarray(Partition(tuple(self.labels)).labels)


class GreedyMapOptimizer:
    """多次隨機重新開始的 map function 最小化

    每次重新開始: 依隨機順序把節點移到使 L 下降最多的相鄰社群 (或新的單點社群)，
    直到沒有改善超過 tolerance 的移動，再把社群聚合成 supernode 並在上一層重複。
    之後交替做兩種微調，直到兩者都無法再降低 L:

    - fine tune: 以目前分割為起點，重新做單一節點的移動與聚合
    - coarse tune: 把每個社群內部再切成子社群，以子社群為單位在社群之間移動
    """

    def __init__(self, config: OptimizerConfig | None = None):
        self.config = config or OptimizerConfig()

    def optimize(self, P: TransitionMatrix, pi: StationaryDistribution) -> OptimizationResult:
        cfg = self.config
        F = flow_matrix(P, pi)
        pi_vec = pi.pi if isinstance(pi, StationaryDistribution) else np.asarray(pi, dtype=float)

        with ThreadPoolExecutor(max_workers=min(cfg.max_workers, cfg.restarts)) as executor:
            runs = list(executor.map(lambda i: self._restart(F, pi_vec, i), range(cfg.restarts)))

        # 依 restart 編號合併，平手取編號較小者
        scored = [(map_function(partition, P, pi).total, i, partition, history)
                  for i, (partition, history) in enumerate(runs)]
        total, index, partition, history = min(scored, key=lambda item: (item[0], item[1]))
        best = OptimizationResult(partition, total, index, tuple(history))

        for candidate in (Partition.one_community(pi_vec.size), Partition.singletons(pi_vec.size)):
            value = map_function(candidate, P, pi).total
            if value < best.codelength - cfg.tolerance:
                best = OptimizationResult(candidate, value, None)

        logger.info(f"最佳化完成: {best.partition.m} 個社群, L = {best.codelength:.6f} bits (restart {best.restart})")
        return best

    def _core(self, F: np.ndarray, volume: np.ndarray, rng: np.random.Generator, constant: float,
              initial: np.ndarray | None = None) -> tuple[np.ndarray, list[float]]:
        """節點移動與聚合直到不再合併，回傳原始節點的標籤與每輪的 codelength"""
        cfg = self.config
        assignment = np.arange(volume.size)
        history: list[float] = []

        while True:
            level = _Level(F, volume, rng.permutation(volume.size), constant,
                           cfg.max_outer_passes, cfg.tolerance, initial)
            history += level.history
            labels = level.get_partition()
            assignment = labels[assignment]
            initial = None
            if labels.max() + 1 == labels.size:
                break
            F, volume = _aggregate(F, volume, labels)
            if volume.size == 1:
                break

        return assignment, history

    def _fine_tune(self, F: np.ndarray, pi: np.ndarray, rng: np.random.Generator, constant: float,
                   labels: np.ndarray) -> tuple[np.ndarray, list[float]]:
        return self._core(F, pi, rng, constant, initial=labels)

    def _coarse_tune(self, F: np.ndarray, pi: np.ndarray, rng: np.random.Generator, constant: float,
                     labels: np.ndarray) -> tuple[np.ndarray, list[float]]:
        # 每個社群內部的子社群，以全域唯一的編號記錄
        sub = np.empty(labels.size, dtype=int)
        parent: list[int] = []
        for module in range(labels.max() + 1):
            members = np.flatnonzero(labels == module)
            inner, _ = self._core(F[np.ix_(members, members)], pi[members], rng, 0.0)
            sub[members] = inner + len(parent)
            parent += [module] * (inner.max() + 1)

        F_sub, vol_sub = _aggregate(F, pi, sub)
        moved, history = self._core(F_sub, vol_sub, rng, constant, initial=np.asarray(parent))
        return moved[sub], history

    def _restart(self, F: np.ndarray, pi: np.ndarray, index: int) -> tuple[Partition, list[float]]:
        cfg = self.config
        rng = np.random.default_rng((cfg.rng_seed, index))
        constant = -float(plogp(pi).sum())

        labels, history = self._core(F, pi, rng, constant)
        best = _codelength(*module_flows(F, pi, labels), constant)

        for _ in range(cfg.max_outer_passes):
            improved = False
            for tune in (self._fine_tune, self._coarse_tune):
                candidate, steps = tune(F, pi, rng, constant, labels)
                value = _codelength(*module_flows(F, pi, candidate), constant)
                if value < best - cfg.tolerance:
                    labels, best, improved = canonical_labels(candidate), value, True
                    history += steps
            if not improved:
                break

        return Partition(tuple(labels)), history


def minimize_map(P: TransitionMatrix, pi: StationaryDistribution, cfg: OptimizerConfig | None = None) -> Partition:
    """回傳所有重新開始中 codelength 最小的分割"""
    return GreedyMapOptimizer(cfg).optimize(P, pi).partition
