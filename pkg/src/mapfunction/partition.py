"""節點分割 (社群標籤)、分割列舉與 CSV 讀寫"""
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
import pandas as pd

from src.config.catalog import Labels


def canonicalize(labels: Iterable[int]) -> Labels:
    """依節點順序中第一次出現的先後重新編號為 0..m-1"""
    mapping: dict[int, int] = {}
    return tuple(mapping.setdefault(int(label), len(mapping)) for label in labels)


@dataclass(frozen=True)
class Partition:
    """滿射的節點 -> 社群標籤，建構時即轉為標準形式"""
    labels: Labels

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("A partition needs a non-empty label vector")
        if not np.all(labels == np.round(labels)):
            raise ValueError("Community labels must be integers")
        object.__setattr__(self, 'labels', canonicalize(labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return max(self.labels) + 1

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=int)

    def membership(self) -> np.ndarray:
        """n x m 的 0/1 歸屬矩陣"""
        M = np.zeros((self.n, self.m))
        M[np.arange(self.n), self.array] = 1.0
        return M

    def communities(self) -> list[frozenset[int]]:
        """依社群編號排列的節點集合"""
        groups = [[] for _ in range(self.m)]
        for node, label in enumerate(self.labels):
            groups[label].append(node)
        return [frozenset(group) for group in groups]

    @classmethod
    def from_communities(cls, communities: Iterable[Iterable[int]], n: int) -> 'Partition':
        labels = np.full(n, -1)
        for index, members in enumerate(communities):
            members = list(members)
            if np.any(labels[members] >= 0):
                raise ValueError("Communities overlap")
            labels[members] = index
        if np.any(labels < 0):
            raise ValueError(f"Nodes {np.flatnonzero(labels < 0).tolist()} are not assigned to a community")
        return cls(tuple(labels))

    @classmethod
    def one_community(cls, n: int) -> 'Partition':
        return cls((0,) * n)

    @classmethod
    def singletons(cls, n: int) -> 'Partition':
        return cls(tuple(range(n)))

    def __str__(self):
        return '{' + ', '.join('{' + ', '.join(str(i + 1) for i in sorted(c)) + '}' for c in self.communities()) + '}'


def all_partitions(n: int) -> Iterator[Partition]:
    """以 restricted growth string 列舉 n 個節點的全部 Bell(n) 種分割"""
    if n <= 0:
        return
    labels = [0] * n
    peak = [0] * n   # peak[i] = max(labels[:i+1])

    while True:
        yield Partition(tuple(labels))

        # 由右往左找可以遞增的位置
        i = n - 1
        while i > 0 and labels[i] > peak[i - 1]:
            i -= 1
        if i == 0:
            return
        labels[i] += 1
        peak[i] = max(peak[i - 1], labels[i])
        for j in range(i + 1, n):
            labels[j] = 0
            peak[j] = peak[i]


def write_partition(partition: Partition, path: str | Path):
    """CSV 欄位: node,community"""
    pd.DataFrame({'node': np.arange(partition.n), 'community': partition.array}).to_csv(path, index=False)


def read_partition(path: str | Path) -> Partition:
    frame = pd.read_csv(path)
    if list(frame.columns) != ['node', 'community']:
        raise ValueError(f"{Path(path).name}: expected header 'node,community', got {list(frame.columns)}")
    frame = frame.sort_values('node')
    if not np.array_equal(frame['node'].to_numpy(), np.arange(len(frame))):
        raise ValueError(f"{Path(path).name}: node ids must be 0..{len(frame) - 1}")
    return Partition(tuple(frame['community'].astype(int)))
