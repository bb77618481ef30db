"""
Exception hierarchy for the coverage planner.
Typed errors let the CLI tell bad input (exit 1) apart from runtime
failures (exit 2) instead of catching bare Exception everywhere.
"""

from typing import Optional


class CoverageError(Exception):
    """Base for all planner errors."""


class MapFormatError(CoverageError):
    """
    Map text could not be parsed.
    row/col are 0-based body positions (row -1 is the header), None when not applicable.
    """

    def __init__(self, message: str, row: Optional[int] = None, col: Optional[int] = None):
        location = ""
        if row is not None and col is not None:
            location = f" (line {row + 2}, column {col + 1})"
        elif row is not None:
            location = f" (line {row + 2})"
        super().__init__(message + location)
        self.row = row
        self.col = col


class InvalidMapError(CoverageError):
    """A map, cell or UAV count breaks a grid invariant."""


class GenotypeError(CoverageError):
    """Genotype has the wrong length or a gene outside [0, 1]."""


class ConfigError(CoverageError):
    """Experiment or GA configuration is invalid."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class RecordsFormatError(CoverageError):
    """Records file is malformed or has an unsupported format version."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class SinkWriteError(CoverageError):
    """A run record could not be appended to the records sink."""


class BudgetExceededError(CoverageError):
    """Oracle search hit its enumeration or state cap."""

    def __init__(self, message: str, budget: int):
        super().__init__(message)
        self.budget = budget


class ResultFormatError(CoverageError):
    """A solve result document is unreadable or carries no paths."""
