#!/usr/bin/env python3
"""
🛩️ UAV Coverage Planner - Utilities Module
"""

from .logger import get_logger, setup_logging, log_exception, LogTimer
from .run_progress import GridProgressDisplay, GridStats

__all__ = [
    'get_logger', 'setup_logging', 'log_exception', 'LogTimer',
    'GridProgressDisplay', 'GridStats',
]
