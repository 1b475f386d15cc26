"""邊列表、節點屬性與分割檔案的讀寫"""
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from src.config.errors import GraphFormatError
from src.graph.digraph import WeightedDigraph, AbsorptionConfig


logger = logging.getLogger(__name__)


def _read_table(path: Path, names: list[str], min_columns: int) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    try:
        frame = pd.read_csv(path, sep=r'\s+', comment='#', header=None, engine='python')
    except pd.errors.EmptyDataError:
        raise GraphFormatError(f"{path.name} contains no data rows")

    if frame.shape[1] < min_columns or frame.shape[1] > len(names):
        raise GraphFormatError(f"{path.name}: expected {min_columns}-{len(names)} columns, got {frame.shape[1]}")
    frame.columns = names[:frame.shape[1]]
    if frame.isna().any().any():
        raise GraphFormatError(f"{path.name}: ragged rows")
    return frame


def read_edge_list(path: str | Path, n: int | None = None) -> WeightedDigraph:
    """讀取 `src dst weight` 邊列表 (0-indexed，# 為註解)

    src -> dst 的邊存放在 a[dst, src]，重複的邊權重相加。
    """
    frame = _read_table(Path(path), ['src', 'dst', 'weight'], min_columns=3)
    src = frame['src'].to_numpy()
    dst = frame['dst'].to_numpy()
    if not (np.all(src == np.round(src)) and np.all(dst == np.round(dst))):
        raise GraphFormatError(f"{Path(path).name}: node ids must be integers")
    if np.any(src < 0) or np.any(dst < 0):
        raise GraphFormatError(f"{Path(path).name}: node ids must be non-negative")
    if np.any(src == dst):
        raise GraphFormatError(f"{Path(path).name}: self-edges are not allowed")

    try:
        graph = WeightedDigraph.from_edges(zip(src.astype(int), dst.astype(int), frame['weight'].astype(float)), n=n)
    except ValueError as e:
        raise GraphFormatError(f"{Path(path).name}: {e}") from e

    logger.info(f"讀取 {Path(path).name}: {graph.n} 個節點, {len(frame)} 條邊")
    return graph


def _node_index(frame: pd.DataFrame, path: Path, n: int | None) -> tuple[np.ndarray, int]:
    nodes = frame['node'].astype(int).to_numpy()
    size = n if n is not None else int(nodes.max()) + 1
    if np.unique(nodes).size != nodes.size:
        raise GraphFormatError(f"{path.name}: duplicate node ids")
    if nodes.min() < 0 or nodes.max() >= size or nodes.size != size:
        raise GraphFormatError(f"{path.name}: expected one row for each node 0..{size - 1}")
    return nodes, size


def read_node_attributes(path: str | Path, n: int | None = None, h: float | np.ndarray | None = None) -> AbsorptionConfig:
    """讀取 `node delta [h]`，缺少的 h 預設為 0 (或使用參數 h)"""
    path = Path(path)
    frame = _read_table(path, ['node', 'delta', 'h'], min_columns=2)
    nodes, size = _node_index(frame, path, n)

    delta = np.empty(size)
    delta[nodes] = frame['delta'].astype(float).to_numpy()
    scale = np.zeros(size)
    if 'h' in frame:
        scale[nodes] = frame['h'].astype(float).to_numpy()
    if h is not None:
        scale[:] = h

    try:
        return AbsorptionConfig(delta, scale)
    except ValueError as e:
        raise GraphFormatError(f"{path.name}: {e}") from e


def read_node_values(path: str | Path, n: int | None = None) -> np.ndarray:
    """讀取 `node value` (例如每個節點的 h)"""
    path = Path(path)
    frame = _read_table(path, ['node', 'value'], min_columns=2)
    nodes, size = _node_index(frame, path, n)
    values = np.empty(size)
    values[nodes] = frame['value'].astype(float).to_numpy()
    return values


def write_edge_list(graph: WeightedDigraph, path: str | Path):
    edges = pd.DataFrame(graph.edges(), columns=['src', 'dst', 'weight'])
    with open(path, 'w', encoding='utf-8') as file:
        file.write(f"# {graph.n} nodes, column convention: weight of src -> dst\n")
        edges.to_csv(file, sep=' ', header=False, index=False)


def write_node_attributes(cfg: AbsorptionConfig, path: str | Path):
    frame = pd.DataFrame({'node': np.arange(cfg.n), 'delta': cfg.delta, 'h': cfg.h})
    frame.to_csv(path, sep=' ', header=False, index=False)


def write_matrix(matrix: np.ndarray, path: str | Path):
    """除錯用的 CSV 矩陣輸出"""
    pd.DataFrame(np.asarray(matrix)).to_csv(path, header=False, index=False, float_format='%.17g')


def read_matrix(path: str | Path) -> np.ndarray:
    return pd.read_csv(path, header=None).to_numpy(dtype=float)
