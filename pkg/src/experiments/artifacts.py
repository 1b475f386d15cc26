"""實驗輸出檔: CSV、JSON sidecar 與網路/排程的傾印，失敗時整批刪除"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from src.graph.digraph import WeightedDigraph
from src.graph.io import write_edge_list


logger = logging.getLogger(__name__)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return value


@dataclass
class ArtifactWriter:
    """記錄本次執行寫出的每個檔案"""
    run_dir: Path
    written: list[Path] = field(default_factory=list)
    tables: dict[str, pd.DataFrame] = field(default_factory=dict)

    def _track(self, name: str) -> Path:
        path = Path(self.run_dir) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(path)
        return path

    def csv(self, name: str, frame: pd.DataFrame) -> Path:
        path = self._track(name)
        frame.to_csv(path, index=False)
        self.tables[name] = frame
        logger.info(f"寫入 {path}")
        return path

    def json(self, name: str, data: dict) -> Path:
        path = self._track(name)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(_jsonable(data), f, indent=2, sort_keys=False)
        logger.info(f"寫入 {path}")
        return path

    def edge_list(self, name: str, graph: WeightedDigraph) -> Path:
        path = self._track(name)
        write_edge_list(graph, path)
        logger.info(f"寫入 {path}")
        return path

    def cleanup(self):
        """刪除本次執行已寫出的檔案"""
        for path in self.written:
            try:
                path.unlink(missing_ok=True)
            except OSError as e:
                logger.error(f"無法刪除 {path}: {e}")
        logger.info(f"已刪除 {len(self.written)} 個不完整的輸出檔")
        self.written.clear()
        self.tables.clear()


def write_sidecar(writer: ArtifactWriter, name: str, experiment: str, seed: int, params: dict,
                  summary: dict | None = None) -> Path:
    """JSON sidecar: 重新執行所需的全部參數與種子"""
    outputs = [path.name for path in writer.written]
    return writer.json(name, {
        'experiment': experiment,
        'seed': seed,
        'params': params,
        'outputs': outputs,
        'summary': summary or {},
    })


def read_sidecar(path: str | Path) -> dict:
    with open(path, encoding='utf-8') as f:
        data = json.load(f)
    missing = {'experiment', 'seed', 'params'} - data.keys()
    if missing:
        raise ValueError(f"{Path(path).name} is missing sidecar fields {sorted(missing)}")
    return data
