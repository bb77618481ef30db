"""
🛩️ UAV Coverage Planner - evolving per-UAV movement maps for complete coverage of grid maps
"""

from .errors import (
    BudgetExceededError,
    ConfigError,
    CoverageError,
    GenotypeError,
    InvalidMapError,
    MapFormatError,
    RecordsFormatError,
    ResultFormatError,
    SinkWriteError,
)
from .gridmap import Coord, Direction, GridMap, load_map, parse_map, start_positions, theoretical_min_epochs
from .sim import SimResult, evaluate
from .evolve import GaRunResult, run_ga

__all__ = [
    'BudgetExceededError', 'ConfigError', 'CoverageError', 'GenotypeError', 'InvalidMapError',
    'MapFormatError', 'RecordsFormatError', 'ResultFormatError', 'SinkWriteError',
    'Coord', 'Direction', 'GridMap', 'load_map', 'parse_map', 'start_positions', 'theoretical_min_epochs',
    'SimResult', 'evaluate', 'GaRunResult', 'run_ga',
]
