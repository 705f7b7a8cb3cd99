from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[3]

DATA_DIR = PROJECT_ROOT / "data"
REPORT_DIR = DATA_DIR / "reports"
DB_DIR = DATA_DIR / "db"

DB_PATH = DB_DIR / "atlas.db"

SCENARIO_DIR = PROJECT_ROOT / "scenarios"
DEFAULT_SCENARIO = SCENARIO_DIR / "default.scn"


def ensure_dirs() -> None:
    for d in (DATA_DIR, REPORT_DIR, DB_DIR):
        d.mkdir(parents=True, exist_ok=True)
