"""
tensorforge Configuration
Configuration settings for the exact tensor toolkit
"""

import os

from dotenv import load_dotenv, find_dotenv

# Load .env from project root (robust in various run contexts)
load_dotenv(find_dotenv(usecwd=True))


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        # ConfigError lives in models
        from models.errors import ConfigError

        raise ConfigError(f"{name} must be an integer, got {raw!r}")


# Logging Configuration
LOG_LEVEL = os.getenv("TENSORFORGE_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Run Configuration
DEFAULT_SEED = _env_int("TENSORFORGE_SEED", 0)
DEFAULT_BUDGET = _env_int("TENSORFORGE_BUDGET", 1_000_000)
DEFAULT_WORKERS = _env_int("TENSORFORGE_WORKERS", 1)

# Parameter Search Configuration
DEFAULT_MU = "52733/100000"
DEFAULT_M_MAX = 60000
PREFILTER_MARGIN = 1e-6
DEFAULT_APPENDIX_SAMPLES = 1000
DEFAULT_APPENDIX_M_MAX = 10_000

# mu Grid Configuration
MU_GRID_STEP = 0.001
MU_REFINE_FACTOR = 10
MU_REFINE_LEVELS = 0

# Decomposition Search Configuration (ALS)
ALS_MAX_ITER = 500
ALS_TOL = 1e-10
ALS_RESTARTS = 8
DENOMINATOR_CAP = 10**6

# Random Sampling Configuration
SAMPLE_LOW = -10
SAMPLE_HIGH = 10
TERRACINI_TRIALS = 3

# Phi Family Configuration
FAMILY_SAMPLES = 100
