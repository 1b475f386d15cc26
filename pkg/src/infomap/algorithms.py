"""吸收漫步的 InfoMap: 線性輸入、指數輸入、Markov time 掃描與子社群"""
import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import pandas as pd
from rich.progress import Progress, SpinnerColumn, TextColumn, BarColumn, MofNCompleteColumn, TimeRemainingColumn

from src.config.catalog import SweepKind, TransitionKind
from src.config.errors import AbsorbMapError, NotStronglyConnected
from src.config.richer import console
from src.graph.digraph import WeightedDigraph, AbsorptionConfig, is_strongly_connected
from src.markov import TransitionMatrix, transition_linear, transition_exponential, stationary
from src.mapfunction import Partition
from src.infomap.optimizer import OptimizerConfig, OptimizationResult, GreedyMapOptimizer


logger = logging.getLogger(__name__)


def _require_strongly_connected(g: WeightedDigraph):
    if not is_strongly_connected(g):
        raise NotStronglyConnected("InfoMap for absorbing random walks requires a strongly connected graph")


def _optimize(P: TransitionMatrix, opt: OptimizerConfig | None) -> OptimizationResult:
    return GreedyMapOptimizer(opt).optimize(P, stationary(P))


def algorithm1(g: WeightedDigraph, cfg_abs: AbsorptionConfig, t: float,
               opt: OptimizerConfig | None = None) -> Partition:
    """線性輸入 P_l(D_delta, H, t)，t 必須在可行上界內"""
    _require_strongly_connected(g)
    return _optimize(transition_linear(g, cfg_abs, t), opt).partition


def algorithm2(g: WeightedDigraph, cfg_abs: AbsorptionConfig, t: float,
               opt: OptimizerConfig | None = None) -> Partition:
    """指數輸入 P_e(D_delta, H, t)"""
    _require_strongly_connected(g)
    return _optimize(transition_exponential(g, cfg_abs, t), opt).partition


@dataclass(frozen=True)
class Plateau:
    num_communities: int
    lower: float   # 與前一個取樣點的中點
    upper: float   # 與下一個取樣點的中點
    partition: Partition


@dataclass(frozen=True)
class SweepResult:
    """Markov time 掃描結果，失敗的時間點以 -1 / NaN / None 表示並記錄錯誤訊息"""
    kind: TransitionKind
    times: np.ndarray
    community_counts: np.ndarray
    partitions: tuple[Partition | None, ...]
    codelengths: np.ndarray
    errors: tuple[str | None, ...]

    def __post_init__(self):
        lengths = {len(self.times), len(self.community_counts), len(self.partitions),
                   len(self.codelengths), len(self.errors)}
        if len(lengths) != 1:
            raise ValueError(f"Sweep fields have unequal lengths {sorted(lengths)}")

    def to_frame(self) -> pd.DataFrame:
        """CSV 欄位: t,num_communities,codelength"""
        return pd.DataFrame({
            't': self.times,
            'num_communities': self.community_counts,
            'codelength': self.codelengths,
        })

    def plateaus(self) -> list[Plateau]:
        """相鄰時間點有相同分割的區間，邊界取相鄰取樣點的中點 (端點取樣本本身)"""
        plateaus: list[Plateau] = []
        start = None
        for i, partition in enumerate(self.partitions):
            if partition is None:
                start = None
                continue
            if start is None or self.partitions[start] != partition:
                start = i
            closes = i + 1 == len(self.partitions) or self.partitions[i + 1] != partition
            if closes:
                lower = self.times[0] if start == 0 else (self.times[start - 1] + self.times[start]) / 2
                upper = self.times[-1] if i + 1 == len(self.times) else (self.times[i] + self.times[i + 1]) / 2
                plateaus.append(Plateau(partition.m, float(lower), float(upper), partition))
        return plateaus

    def times_with(self, partition: Partition) -> np.ndarray:
        return np.array([t for t, p in zip(self.times, self.partitions) if p == partition])


def markov_time_sweep(g: WeightedDigraph,
                      cfg_abs: AbsorptionConfig,
                      kind: SweepKind | TransitionKind,
                      times: Iterable[float],
                      opt: OptimizerConfig | None = None,
                      progress: bool = False) -> SweepResult:
    """對每個 Markov time 執行 Algorithm 1 (linear) 或 Algorithm 2 (exponential)

    單一時間點的錯誤 (例如超出可行上界) 會被記錄，掃描繼續進行。
    """
    kind = TransitionKind(kind)
    if kind not in (TransitionKind.LINEAR, TransitionKind.EXPONENTIAL):
        raise ValueError(f"Markov-time sweeps need a linear or exponential input, got '{kind.value}'")
    _require_strongly_connected(g)

    times = np.asarray(list(times), dtype=float)
    build = transition_linear if kind == TransitionKind.LINEAR else transition_exponential
    counts = np.full(times.size, -1, dtype=int)
    codelengths = np.full(times.size, np.nan)
    partitions: list[Partition | None] = [None] * times.size
    errors: list[str | None] = [None] * times.size

    with Progress(
            SpinnerColumn(),
            TextColumn("[bold blue]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeRemainingColumn(),
            console=console,
            transient=True,
            disable=not progress,
    ) as bar:
        task = bar.add_task(f"[cyan]{kind.value} sweep", total=times.size)

        for i, t in enumerate(times):
            try:
                result = _optimize(build(g, cfg_abs, t), opt)
                partitions[i] = result.partition
                counts[i] = result.partition.m
                codelengths[i] = result.codelength
            except (AbsorbMapError, ValueError) as e:
                errors[i] = str(e)
                logger.error(f"Markov time t={t:.6g} failed: {e}")
            bar.update(task, advance=1, description=f"[cyan]{kind.value} sweep t={t:.4g}")

    logger.info(f"{kind.value} 掃描完成: {times.size} 個時間點, {sum(e is not None for e in errors)} 個失敗")
    return SweepResult(kind, times, counts, tuple(partitions), codelengths, tuple(errors))


def subcommunities(M: Partition, planted: Iterable[int]) -> list[frozenset[int]]:
    """M 的社群與 planted 節點集合的非空交集，依最小節點排序"""
    planted = frozenset(int(node) for node in planted)
    if not planted or max(planted) >= M.n or min(planted) < 0:
        raise ValueError(f"Planted set must be a non-empty subset of nodes 0..{M.n - 1}")
    pieces = [community & planted for community in M.communities()]
    return sorted((piece for piece in pieces if piece), key=min)
