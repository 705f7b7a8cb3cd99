import os

DB_READ_ONLY = os.getenv("GDQ_DB_READ_ONLY", "0") == "1"

LOG_LEVEL = os.getenv("GDQ_LOG_LEVEL", "WARNING").upper()

# 预解析失败时直接抛 ValueError，不做静默回退
KAPPA_MAX = float(os.getenv("GDQ_KAPPA_MAX", "1e8"))
TOL_SCALE = float(os.getenv("GDQ_TOL_SCALE", "1.0"))
