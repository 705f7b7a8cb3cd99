# gdq_atlas.config
from .paths import (
    DATA_DIR,
    DB_DIR,
    DB_PATH,
    DEFAULT_SCENARIO,
    PROJECT_ROOT,
    REPORT_DIR,
    SCENARIO_DIR,
    ensure_dirs,
)
from .settings import DB_READ_ONLY, KAPPA_MAX, LOG_LEVEL, TOL_SCALE

__all__ = [
    "PROJECT_ROOT",
    "DATA_DIR",
    "REPORT_DIR",
    "DB_DIR",
    "DB_PATH",
    "SCENARIO_DIR",
    "DEFAULT_SCENARIO",
    "ensure_dirs",
    "DB_READ_ONLY",
    "LOG_LEVEL",
    "KAPPA_MAX",
    "TOL_SCALE",
]
