import logging
import os
from pathlib import Path
from datetime import datetime

from src.config.settings import OUTPUT_DIR, LOGS_DIR, DEFAULT_SEED, SEED_ENV_VAR
from src.config.catalog import ExperimentName


__all__ = ['setup_logging', 'setup_directory_structure', 'resolve_seed']


def setup_logging(log_dir: Path = LOGS_DIR):
    """設置日誌配置"""
    # 確保日誌目錄存在
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)

    # 創建日誌檔案路徑
    log_file = log_dir / f"absorbmap_{datetime.now().strftime('%Y%m')}.log"

    # 配置基本設定
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name).10s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        handlers=[
            logging.FileHandler(log_file, encoding='utf-8'),
            logging.StreamHandler()  # 同時輸出到控制台
        ]
    )


def resolve_seed(seed: int | None = None) -> int:
    """環境變數 ABSORBMAP_SEED 優先，其次為描述中的種子"""
    env_seed = os.getenv(SEED_ENV_VAR)
    if env_seed is not None:
        return int(env_seed)
    return DEFAULT_SEED if seed is None else int(seed)


def setup_directory_structure(name: ExperimentName,
                              seed: int,
                              output_dir: Path | None = None) -> Path:
    """確保所有必要的目錄存在，回傳本次實驗的輸出目錄"""
    base_dir = OUTPUT_DIR if output_dir is None else Path(output_dir)
    for directory in [base_dir, LOGS_DIR]:
        directory.mkdir(parents=True, exist_ok=True)

    setup_logging()

    run_dir = base_dir / name / f"seed_{seed}"
    run_dir.mkdir(parents=True, exist_ok=True)
    return run_dir


""" I/O structure
Main Folder (absorbmap_data)
├── logs
│   └── absorbmap_202410.log
└── output
    ├── threenode-la
    │   └── seed_20240301
    │       ├── threenode_la.csv
    │       └── threenode_la.json
    ├── fourclique-sweep
    │   └── ...
    └── sir-stages
        └── seed_20240301
            ├── sir_stages.csv
            ├── sir_stages.json
            ├── network.edges
            └── schedule.json
"""
