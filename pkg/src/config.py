"""Configuration module for loading environment variables."""

import os
from dotenv import load_dotenv
from typing import Optional

# Load environment variables from .env file
load_dotenv()


def get_env(key: str, default: Optional[str] = None) -> Optional[str]:
    """Get environment variable value."""
    return os.getenv(key, default)


# Worker Configuration
THREADS: int = int(get_env('KIRWAN_THREADS', '1'))

# Cache Configuration
CACHE_DIR: str = get_env('KIRWAN_CACHE_DIR', '.kirwan_cache')

# Oracle tolerances, relative to the sample scale max |spectrum entry|
MEMBERSHIP_TOL: float = float(get_env('MEMBERSHIP_TOL', '1e-9'))
TIGHTNESS_TOL: float = float(get_env('TIGHTNESS_TOL', '1e-6'))
SEMISTABLE_TOL: float = float(get_env('SEMISTABLE_TOL', '1e-6'))

# Gradient flow
FLOW_TOL: float = float(get_env('FLOW_TOL', '1e-8'))
FLOW_MAX_STEPS: int = int(get_env('FLOW_MAX_STEPS', '20000'))
FLOW_MAX_HALVINGS: int = int(get_env('FLOW_MAX_HALVINGS', '40'))

# Eigen solver
JACOBI_TOL: float = float(get_env('JACOBI_TOL', '1e-12'))
MAX_ORACLE_N: int = int(get_env('MAX_ORACLE_N', '16'))  # desk-scale guard

# Server Configuration
SERVER_PORT: int = int(get_env('SERVER_PORT', '5000'))

LOG_LEVEL: str = get_env('LOG_LEVEL', 'INFO').upper()

# Bumped whenever the polytope JSON layout changes
SCHEMA_VERSION: int = 1


def validate_config():
    """Validate that configuration values are usable."""
    if THREADS < 1:
        raise ValueError("KIRWAN_THREADS must be at least 1")
    for name, value in (
        ('MEMBERSHIP_TOL', MEMBERSHIP_TOL),
        ('TIGHTNESS_TOL', TIGHTNESS_TOL),
        ('SEMISTABLE_TOL', SEMISTABLE_TOL),
        ('FLOW_TOL', FLOW_TOL),
        ('JACOBI_TOL', JACOBI_TOL),
    ):
        if value <= 0:
            raise ValueError(f"{name} must be positive, got {value}")
    if FLOW_MAX_STEPS < 1 or FLOW_MAX_HALVINGS < 1:
        raise ValueError("FLOW_MAX_STEPS and FLOW_MAX_HALVINGS must be at least 1")
    if LOG_LEVEL not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        raise ValueError(f"LOG_LEVEL {LOG_LEVEL!r} is not a logging level")
