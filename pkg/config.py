"""
🛩️ UAV Coverage Planner - Configuration Management
Environment-based defaults for the CLI; flags always win over these values
"""

import os
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    try:
        return int(raw) if raw.strip() else default
    except ValueError:
        return default


class Config:
    """Base configuration class"""

    # Worker pool for grid-search
    WORKERS = _int_env('UAV_COVERAGE_WORKERS', os.cpu_count() or 1)

    # Logging
    LOG_LEVEL = os.getenv('UAV_COVERAGE_LOG_LEVEL', 'INFO')
    LOG_DIR = os.getenv('UAV_COVERAGE_LOG_DIR', 'logs')

    # Output locations
    RECORDS_PATH = os.getenv('UAV_COVERAGE_RECORDS_PATH', 'results/records.jsonl')
    RESULTS_DIR = os.getenv('UAV_COVERAGE_RESULTS_DIR', 'results')

    # GA defaults for `solve`
    POPULATION = _int_env('UAV_COVERAGE_POPULATION', 1000)
    GENERATIONS = _int_env('UAV_COVERAGE_GENERATIONS', 100)
    SEED = _int_env('UAV_COVERAGE_SEED', 0)


class DevelopmentConfig(Config):
    """Development environment configuration"""


class ProductionConfig(Config):
    """Production environment configuration"""
    LOG_LEVEL = os.getenv('UAV_COVERAGE_LOG_LEVEL', 'WARNING')


# Configuration mapping
config_map = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
}


def get_config(environment: Optional[str] = None) -> Config:
    """Get configuration based on environment"""
    if environment is None:
        environment = os.getenv('UAV_COVERAGE_ENV', 'development')

    config_class = config_map.get(environment, DevelopmentConfig)
    return config_class()
