#!/usr/bin/env python3
"""
🛩️ UAV Coverage - Centralized Logging System
Colored console output, rotating log files and component loggers
"""

import logging
import logging.handlers
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

try:
    from rich.console import Console
    from rich.logging import RichHandler
    RICH_AVAILABLE = True
except ImportError:
    RICH_AVAILABLE = False


LOGGER_NAME = "uav_coverage"


class ColoredFormatter(logging.Formatter):
    """Custom formatter with colors for terminal output"""

    # ANSI color codes
    COLORS = {
        'DEBUG': '\033[36m',     # Cyan
        'INFO': '\033[32m',      # Green
        'WARNING': '\033[33m',   # Yellow
        'ERROR': '\033[31m',     # Red
        'CRITICAL': '\033[35m',  # Magenta
        'RESET': '\033[0m'
    }

    def format(self, record):
        levelname = record.levelname
        if levelname in self.COLORS:
            record.levelname = f"{self.COLORS[levelname]}{levelname}{self.COLORS['RESET']}"
        record.component = f"[{record.name.rsplit('.', 1)[-1]}]" if '.' in record.name else ""
        try:
            return super().format(record)
        finally:
            record.levelname = levelname


class CoverageLogger:
    """
    Centralized logging for the planner and its CLI

    Features:
    - Environment-based log level (UAV_COVERAGE_LOG_LEVEL)
    - Rotating run log plus a separate errors-only log
    - Rich console output on interactive terminals
    - Console-only mode for worker processes
    """

    def __init__(self, name: str = LOGGER_NAME, log_dir: Optional[str] = None, to_file: bool = True):
        self.name = name
        self.log_dir = Path(log_dir or os.getenv('UAV_COVERAGE_LOG_DIR', 'logs'))
        self.to_file = to_file

        env_level = os.getenv('UAV_COVERAGE_LOG_LEVEL', 'INFO').upper()
        self.log_level = getattr(logging, env_level, logging.INFO)

        self.logger = logging.getLogger(name)
        self.logger.setLevel(logging.DEBUG)  # Filter at handler level
        self.logger.propagate = False

        # Prevent duplicate logs on re-initialisation
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)

        self._setup_handlers()

    def _setup_handlers(self):
        """Setup console and (optionally) file handlers"""

        # Console always goes to stderr: stdout carries tables and machine output
        if RICH_AVAILABLE and sys.stderr.isatty():
            console_handler = RichHandler(
                console=Console(stderr=True),
                show_time=True,
                show_path=False,
                enable_link_path=False
            )
        else:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(ColoredFormatter(
                fmt='%(asctime)s | %(levelname)s %(component)s | %(message)s',
                datefmt='%H:%M:%S'
            ))
        console_handler.setLevel(self.log_level)
        self.logger.addHandler(console_handler)

        if not self.to_file:
            return

        self.log_dir.mkdir(parents=True, exist_ok=True)

        file_formatter = logging.Formatter(
            fmt='%(asctime)s | %(levelname)-8s | %(name)s:%(lineno)d | %(funcName)s() | %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        # 10MB max, keep 5 files
        file_handler = logging.handlers.RotatingFileHandler(
            self.log_dir / f"{self.name}.log",
            maxBytes=10 * 1024 * 1024,
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(file_formatter)
        self.logger.addHandler(file_handler)

        error_handler = logging.handlers.RotatingFileHandler(
            self.log_dir / f"{self.name}_errors.log",
            maxBytes=5 * 1024 * 1024,
            backupCount=3,
            encoding='utf-8'
        )
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(file_formatter)
        self.logger.addHandler(error_handler)

    def get_logger(self, component: Optional[str] = None) -> logging.Logger:
        """Get logger for specific component"""
        if component:
            return self.logger.getChild(component)
        return self.logger


# Global logger instance
_global_logger: Optional[CoverageLogger] = None


def get_logger(component: str = None) -> logging.Logger:
    """
    Get logger instance for component

    Console only until setup_logging() adds the log files.

    Usage:
    logger = get_logger('evolve')
    logger.info("Starting GA run")
    """
    global _global_logger

    if _global_logger is None:
        _global_logger = CoverageLogger(to_file=False)

    return _global_logger.get_logger(component)


def setup_logging(log_level: str = None, log_dir: str = None, to_file: bool = True) -> CoverageLogger:
    """
    Initialize logging system

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR, CRITICAL
        log_dir: Directory for log files (defaults to UAV_COVERAGE_LOG_DIR or ./logs)
        to_file: False for worker processes, which only log to the console
    """
    global _global_logger

    if log_level:
        os.environ['UAV_COVERAGE_LOG_LEVEL'] = log_level.upper()

    _global_logger = CoverageLogger(log_dir=log_dir, to_file=to_file)

    logger = _global_logger.get_logger('system')
    logger.debug(
        f"Logging initialized | level={logging.getLevelName(_global_logger.log_level)} "
        f"| dir={_global_logger.log_dir} | to_file={to_file}"
    )

    return _global_logger


def log_exception(logger: logging.Logger, exc: Exception, context: str = None):
    """
    Exception logging with context

    Usage:
    try:
        run_grid(grid, sink)
    except Exception as e:
        log_exception(logger, e, "grid search")
        raise
    """
    message = f"Exception in {context or 'operation'}: {str(exc)}"
    logger.error(message, exc_info=True)


class LogTimer:
    """Context manager for timing operations"""

    def __init__(self, logger: logging.Logger, operation: str, level: int = logging.INFO):
        self.logger = logger
        self.operation = operation
        self.level = level
        self.start_time = None
        self.duration = 0.0

    def __enter__(self):
        self.start_time = datetime.now()
        self.logger.log(self.level, f"Starting {self.operation}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration = (datetime.now() - self.start_time).total_seconds()

        if exc_type:
            self.logger.error(f"Failed {self.operation} after {self.duration:.3f}s: {exc_val}")
        else:
            self.logger.log(self.level, f"Completed {self.operation} in {self.duration:.3f}s")
