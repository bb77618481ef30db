"""
🧬 Genotype codec
A genotype holds one real gene in [0, 1] per (UAV, visitable cell), laid out
UAV-major. Each gene selects one of the cell's feasible directions by
splitting [0, 1) into k equal intervals; 1.0 falls into the last one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from planner.errors import GenotypeError
from planner.gridmap import Coord, Direction, GridMap, move_table

# A cell whose feasible set is empty maps to None (no move)
Move = Optional[Direction]

GLYPHS = {
    Direction.UP: "↑",
    Direction.DOWN: "↓",
    Direction.LEFT: "←",
    Direction.RIGHT: "→",
    None: "·",
}

ASCII_GLYPHS = {
    Direction.UP: "^",
    Direction.DOWN: "v",
    Direction.LEFT: "<",
    Direction.RIGHT: ">",
    None: ".",
}


@dataclass(frozen=True)
class MovementMap:
    """Fixed outgoing direction per visitable cell, indexed like visitable_cells()."""
    directions: tuple[Move, ...]

    def at(self, grid: GridMap, cell: Coord) -> Move:
        return self.directions[move_table(grid).index[Coord(*cell)]]


def genotype_length(grid: GridMap, n: int) -> int:
    return n * grid.visitable_count


def decode_gene(g: float, k: int) -> int:
    """Index of the interval of [0, 1) holding g, with k equal intervals."""
    if k < 1:
        raise GenotypeError(f"cannot decode a gene for a cell with {k} feasible moves")
    if not 0.0 <= g <= 1.0 or math.isnan(g):
        raise GenotypeError(f"gene {g!r} is outside [0, 1]")
    return min(int(math.floor(g * k)), k - 1)


def validate_genotype(genotype: Sequence[float], grid: GridMap, n: int) -> np.ndarray:
    genes = np.asarray(genotype, dtype=np.float64)
    expected = genotype_length(grid, n)
    if genes.ndim != 1 or genes.shape[0] != expected:
        raise GenotypeError(
            f"genotype length {genes.size} does not match {n} UAVs x {grid.visitable_count} cells = {expected}"
        )
    if genes.size and (np.isnan(genes).any() or genes.min() < 0.0 or genes.max() > 1.0):
        raise GenotypeError("genotype has genes outside [0, 1]")
    return genes


def decode_population(genes: np.ndarray, grid: GridMap, n: int) -> np.ndarray:
    """
    Vectorised decode of one genotype or a (P, n*V) population into target
    cell indices of shape (..., n, V); -1 marks cells with no feasible move.
    """
    table = move_table(grid)
    shaped = np.asarray(genes, dtype=np.float64).reshape(*np.shape(genes)[:-1], n, table.size)
    k = table.counts
    choice = np.minimum(np.floor(shaped * k).astype(np.int64), np.maximum(k - 1, 0))
    targets = table.targets[np.arange(table.size), choice]
    return np.where(k > 0, targets, -1)


def build_movement_maps(genotype: Sequence[float], grid: GridMap, n: int) -> list[MovementMap]:
    genes = validate_genotype(genotype, grid, n)
    table = move_table(grid)
    maps = []
    for u in range(n):
        offset = u * table.size
        directions: list[Move] = []
        for i, feasible in enumerate(table.moves):
            if not feasible:
                directions.append(None)
            else:
                directions.append(feasible[decode_gene(float(genes[offset + i]), len(feasible))])
        maps.append(MovementMap(tuple(directions)))
    return maps


def encode_movement_maps(maps: Sequence[MovementMap | dict], grid: GridMap) -> np.ndarray:
    """
    Inverse of build_movement_maps: each direction becomes the midpoint of its
    decoding interval. Maps may also be given as {Coord: Direction} dicts; cells
    left out take their first feasible direction.
    """
    table = move_table(grid)
    genes = np.zeros(len(maps) * table.size, dtype=np.float64)
    for u, movement_map in enumerate(maps):
        for i, (cell, feasible) in enumerate(zip(table.cells, table.moves)):
            if isinstance(movement_map, MovementMap):
                direction = movement_map.directions[i]
            else:
                direction = movement_map.get(cell, feasible[0] if feasible else None)
            if not feasible:
                continue
            if direction not in feasible:
                raise GenotypeError(f"direction {direction} is not feasible at cell {cell}")
            genes[u * table.size + i] = (feasible.index(direction) + 0.5) / len(feasible)
    return genes


def movement_map_rows(movement_map: MovementMap, grid: GridMap, ascii_only: bool = False) -> list[str]:
    """Glyph rows for display; obstacles are '#'."""
    glyphs = ASCII_GLYPHS if ascii_only else GLYPHS
    table = move_table(grid)
    rows = []
    for r in range(grid.rows):
        row = []
        for c in range(grid.cols):
            if grid.obstacles[r][c]:
                row.append("#")
            else:
                row.append(glyphs[movement_map.directions[table.index[Coord(r, c)]]])
        rows.append("".join(row))
    return rows
