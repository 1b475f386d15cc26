"""全域設定和常數"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# 存儲路徑
BASE_DIR = Path(os.getenv('ABSORBMAP_HOME', Path.cwd() / 'absorbmap_data'))
OUTPUT_DIR = BASE_DIR / "output"
LOGS_DIR = BASE_DIR / "logs"

# 亂數種子 (ABSORBMAP_SEED 會覆寫實驗描述中的種子)
DEFAULT_SEED = 20240301
SEED_ENV_VAR = 'ABSORBMAP_SEED'

# 數值容許誤差
STOCHASTIC_TOL = 1e-12    # 欄和 = 1 的檢查
NEGATIVITY_TOL = 1e-12    # P_e 捨入誤差造成的負值，超過則視為錯誤
FEASIBILITY_TOL = 1e-12   # 線性化 Markov time 上界的容許誤差
IDENTITY_TOL = 1e-9       # 矩陣恆等式殘差
STATIONARY_TOL = 1e-10    # P pi = pi 的殘差
KERNEL_TOL = 1e-10        # (W - A) u = 0 的殘差

# 最佳化器預設值
DEFAULT_RESTARTS = 20
DEFAULT_MAX_PASSES = 100
DEFAULT_MOVE_TOL = 1e-12

# 平行設定
MAX_WORKERS = min(8, os.cpu_count() or 1)
