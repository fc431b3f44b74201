# app/config.py
import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.replace("_", ""))
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


# --- Budgets ---
CLASS_BUDGET = _int_env("SST_CLASS_BUDGET", 10_000_000)
ENUM_BUDGET = _int_env("SST_ENUM_BUDGET", 10_000_000)

# --- Runtime ---
LOG_LEVEL = os.getenv("SST_LOG_LEVEL", "INFO").upper()
WORKERS = _int_env("SST_WORKERS", 1)

# Run ledger is off unless a URL is configured
DATABASE_URL = os.getenv("SST_DATABASE_URL") or None

MAX_ALPHABET = 36
DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
