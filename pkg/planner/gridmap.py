"""
🗺️ Grid maps: the flight environment
Map file format, built-in maps, feasible-move precomputation and the
epoch bounds every other module measures itself against.

Coordinates are 0-based (row, col) with the origin at the top-left corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import numpy as np

from planner.errors import InvalidMapError, MapFormatError
from utils.logger import get_logger

logger = get_logger("gridmap")

MAPS_DIR = Path(__file__).parent / "maps"
BUILTIN_MAP_IDS = ("map1", "map2", "map3", "map4", "map5", "map6")
MAX_UAVS = 4

FREE_CHAR = "."
OBSTACLE_CHAR = "#"


class Direction(str, Enum):
    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"

    @property
    def delta(self) -> tuple[int, int]:
        return _DELTAS[self]


# Canonical order: decoding intervals and feasible lists follow it
DIRECTIONS: tuple[Direction, ...] = (Direction.UP, Direction.DOWN, Direction.LEFT, Direction.RIGHT)

_DELTAS = {
    Direction.UP: (-1, 0),
    Direction.DOWN: (1, 0),
    Direction.LEFT: (0, -1),
    Direction.RIGHT: (0, 1),
}


class Coord(NamedTuple):
    row: int
    col: int

    def step(self, direction: Direction) -> "Coord":
        dr, dc = direction.delta
        return Coord(self.row + dr, self.col + dc)

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


@dataclass(frozen=True)
class GridMap:
    """Rectangular cell grid; obstacles[r][c] is True for blocked cells."""
    id: str
    rows: int
    cols: int
    obstacles: tuple[tuple[bool, ...], ...] = field(repr=False)

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InvalidMapError(f"map '{self.id}' is empty ({self.rows}x{self.cols})")
        if len(self.obstacles) != self.rows or any(len(row) != self.cols for row in self.obstacles):
            raise InvalidMapError(f"map '{self.id}' obstacle mask does not match {self.rows}x{self.cols}")
        for corner in self.corners():
            if self.obstacles[corner.row][corner.col]:
                raise InvalidMapError(f"map '{self.id}' has an obstacle at corner {corner}")

    def corners(self) -> list[Coord]:
        """Corner cells in start order: top-left, bottom-left, top-right, bottom-right."""
        return [
            Coord(0, 0),
            Coord(self.rows - 1, 0),
            Coord(0, self.cols - 1),
            Coord(self.rows - 1, self.cols - 1),
        ]

    def in_bounds(self, cell: Coord) -> bool:
        return 0 <= cell.row < self.rows and 0 <= cell.col < self.cols

    def is_visitable(self, cell: Coord) -> bool:
        return self.in_bounds(cell) and not self.obstacles[cell.row][cell.col]

    @property
    def obstacle_count(self) -> int:
        return sum(sum(row) for row in self.obstacles)

    @property
    def visitable_count(self) -> int:
        return self.rows * self.cols - self.obstacle_count

    @property
    def size_label(self) -> str:
        return f"{self.rows}x{self.cols}"


@dataclass(frozen=True, eq=False)
class MoveTable:
    """
    Per-map precomputation shared by the codec, simulator and GA.

    targets[i, j] is the cell index reached from cell i by its j-th feasible
    direction, -1 past the end of the feasible list; counts[i] is k(i).
    """
    cells: tuple[Coord, ...]
    index: dict[Coord, int] = field(repr=False)
    moves: tuple[tuple[Direction, ...], ...] = field(repr=False)
    targets: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.cells)


def parse_map(text: str, map_id: str = "custom") -> GridMap:
    """
    Parse map-file content.

    First line "rows cols", then one line per row of '.' (free) and '#'
    (obstacle). LF or CRLF, trailing whitespace and trailing blank lines are
    accepted.
    """
    lines = [line.rstrip() for line in text.replace("\r\n", "\n").replace("\r", "\n").split("\n")]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise MapFormatError("empty map: missing 'rows cols' header")

    header = lines[0].split()
    if len(header) != 2 or not all(part.isascii() and part.isdigit() for part in header):
        raise MapFormatError(f"bad header '{lines[0]}': expected 'rows cols'")
    rows, cols = int(header[0]), int(header[1])
    if rows < 1 or cols < 1:
        raise MapFormatError(f"empty grid: header declares {rows}x{cols}")

    body = lines[1:]
    if len(body) < rows:
        raise MapFormatError(f"expected {rows} rows, found {len(body)}", row=len(body))
    if len(body) > rows:
        raise MapFormatError(f"expected {rows} rows, found {len(body)}", row=rows)

    mask: list[tuple[bool, ...]] = []
    for r, line in enumerate(body):
        if len(line) != cols:
            raise MapFormatError(
                f"ragged row: expected {cols} cells, found {len(line)}", row=r, col=min(len(line), cols)
            )
        row_mask = []
        for c, char in enumerate(line):
            if char == FREE_CHAR:
                row_mask.append(False)
            elif char == OBSTACLE_CHAR:
                row_mask.append(True)
            else:
                raise MapFormatError(f"unknown character {char!r}", row=r, col=c)
        mask.append(tuple(row_mask))

    for corner in (Coord(0, 0), Coord(rows - 1, 0), Coord(0, cols - 1), Coord(rows - 1, cols - 1)):
        if mask[corner.row][corner.col]:
            raise MapFormatError("corner-obstacle: corners are UAV start positions", row=corner.row, col=corner.col)

    return GridMap(id=map_id, rows=rows, cols=cols, obstacles=tuple(mask))


def decode_map_bytes(data: bytes) -> str:
    """UTF-8 map text; an undecodable byte is reported at its line and column."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_start = data.rfind(b"\n", 0, e.start) + 1
        # row -1 is the header line
        row = data.count(b"\n", 0, e.start) - 1
        raise MapFormatError(f"invalid UTF-8 byte 0x{data[e.start]:02x}", row=row, col=e.start - line_start) from e


def read_map_file(path: Path, map_id: str | None = None) -> GridMap:
    return parse_map(decode_map_bytes(path.read_bytes()), map_id=map_id or path.stem)


def serialize_map(grid: GridMap) -> str:
    """Inverse of parse_map (LF line endings, trailing newline)."""
    lines = [f"{grid.rows} {grid.cols}"]
    for row in grid.obstacles:
        lines.append("".join(OBSTACLE_CHAR if blocked else FREE_CHAR for blocked in row))
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def builtin_map(name: str) -> GridMap:
    if name not in BUILTIN_MAP_IDS:
        raise InvalidMapError(f"unknown built-in map '{name}' (expected one of {', '.join(BUILTIN_MAP_IDS)})")
    path = MAPS_DIR / f"{name}.txt"
    return read_map_file(path, map_id=name)


def builtin_maps() -> list[GridMap]:
    """The six maps of increasing complexity, map1 first."""
    return [builtin_map(name) for name in BUILTIN_MAP_IDS]


def load_map(ref: str) -> GridMap:
    """Resolve a built-in name (map1..map6) or a path to a map file."""
    if ref in BUILTIN_MAP_IDS:
        return builtin_map(ref)
    path = Path(ref)
    if not path.is_file():
        raise InvalidMapError(f"'{ref}' is neither a built-in map nor a readable file")
    logger.debug(f"Loading map file {path}")
    return read_map_file(path)


@lru_cache(maxsize=64)
def move_table(grid: GridMap) -> MoveTable:
    cells = tuple(
        Coord(r, c)
        for r in range(grid.rows)
        for c in range(grid.cols)
        if not grid.obstacles[r][c]
    )
    index = {cell: i for i, cell in enumerate(cells)}
    moves = tuple(
        tuple(d for d in DIRECTIONS if grid.is_visitable(cell.step(d)))
        for cell in cells
    )

    targets = np.full((len(cells), len(DIRECTIONS)), -1, dtype=np.int64)
    counts = np.zeros(len(cells), dtype=np.int64)
    for i, (cell, feasible) in enumerate(zip(cells, moves)):
        counts[i] = len(feasible)
        for j, direction in enumerate(feasible):
            targets[i, j] = index[cell.step(direction)]
    targets.setflags(write=False)
    counts.setflags(write=False)

    return MoveTable(cells=cells, index=index, moves=moves, targets=targets, counts=counts)


def visitable_cells(grid: GridMap) -> list[Coord]:
    """Row-major free cells; position in this list is the canonical cell index."""
    return list(move_table(grid).cells)


def _require_cell(grid: GridMap, cell: Coord) -> Coord:
    cell = Coord(*cell)
    if not grid.in_bounds(cell):
        raise InvalidMapError(f"cell {cell} is outside the {grid.size_label} grid")
    if grid.obstacles[cell.row][cell.col]:
        raise InvalidMapError(f"cell {cell} is an obstacle")
    return cell


def feasible_moves(grid: GridMap, cell: Coord) -> list[Direction]:
    """Directions from cell that stay on the grid and avoid obstacles, canonical order."""
    cell = _require_cell(grid, cell)
    return list(move_table(grid).moves[move_table(grid).index[cell]])


def neighbors(grid: GridMap, cell: Coord) -> list[Coord]:
    cell = _require_cell(grid, cell)
    return [cell.step(d) for d in feasible_moves(grid, cell)]


def _require_uav_count(grid: GridMap, n: int) -> None:
    if not 1 <= n <= MAX_UAVS:
        raise InvalidMapError(f"UAV count must be between 1 and {MAX_UAVS}, got {n}")
    if n > grid.visitable_count:
        raise InvalidMapError(f"{n} UAVs exceed the {grid.visitable_count} visitable cells of '{grid.id}'")


def start_positions(grid: GridMap, n: int) -> list[Coord]:
    """Corner starts: top-left, bottom-left, top-right, bottom-right; first n."""
    _require_uav_count(grid, n)
    starts = grid.corners()[:n]
    if len(set(starts)) != n:
        raise InvalidMapError(f"'{grid.id}' ({grid.size_label}) has fewer than {n} distinct corners")
    return starts


def theoretical_min_epochs(grid: GridMap, n: int) -> int:
    """ceil((V - n) / n): every UAV gains at most one new cell per epoch."""
    _require_uav_count(grid, n)
    return -(-(grid.visitable_count - n) // n)


def max_epochs(grid: GridMap, n: int) -> int:
    return 2 * theoretical_min_epochs(grid, n)


def count_color_classes(grid: GridMap) -> tuple[int, int]:
    """Visitable cells on even and odd checkerboard squares ((row + col) % 2)."""
    even = sum(1 for cell in visitable_cells(grid) if (cell.row + cell.col) % 2 == 0)
    return even, grid.visitable_count - even
