import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.getenv("DATA_DIR", str(BASE_DIR / "data")))
UPLOADS_DIR = DATA_DIR / "uploads"
DB_PATH = DATA_DIR / "db.sqlite"

# Ensure directories exist
DATA_DIR.mkdir(parents=True, exist_ok=True)
UPLOADS_DIR.mkdir(parents=True, exist_ok=True)

# Database
DATABASE_URL = f"sqlite+aiosqlite:///{DB_PATH}"

# Application
APP_HOST = os.getenv("APP_HOST", "0.0.0.0")
APP_PORT = int(os.getenv("APP_PORT", "8000"))

# CLI flags can be overridden through CONFORMANCE_<FLAG> variables
ENV_PREFIX = "CONFORMANCE_"


def env_value(name: str, default: str | None = None) -> str | None:
    """Read a prefixed override, e.g. env_value("THREADS") -> $CONFORMANCE_THREADS."""
    return os.getenv(ENV_PREFIX + name.upper(), default)


def env_flag(name: str) -> bool:
    return (env_value(name, "") or "").strip().lower() in ("1", "true", "yes", "on")


# Search limits
DEFAULT_STATE_CAP = int(env_value("STATE_CAP", "10000000"))  # Max reachability nodes + arcs
DEFAULT_EXPANSION_CAP = int(env_value("EXPANSION_CAP", "5000000"))  # Max Dijkstra expansions per call
DEFAULT_THREADS = int(env_value("THREADS", str(os.cpu_count() or 1)))  # Alignment worker pool size

# Pipeline settings
HYBRID_MIN_REDUCTION = 2.0  # Mean k_red needed before hybrid picks the tandem path
FITNESS_DIGITS = 6  # Rounding applied to reported fitness values
