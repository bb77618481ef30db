"""
🛩️ Epoch-synchronized swarm simulator and fitness function

Each epoch every UAV, in ascending index order, reads the direction stored
at its current cell in its own movement map and moves iff the target cell is
neither in its own visited set nor occupied by another UAV (occupancy already
reflects earlier moves of the same epoch).

Fitness (minimized):
  covered      -> the epoch at which the union of visited cells reached V
  not covered  -> max_epochs + number of unvisited cells
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from planner.codec import decode_population, validate_genotype
from planner.gridmap import Coord, Direction, GridMap, max_epochs, move_table, start_positions, theoretical_min_epochs


@dataclass
class SwarmState:
    """Mutable per-evaluation state, on canonical cell indices."""
    positions: list[int]
    per_uav_visited: list[set[int]]
    global_visited: set[int]
    epoch: int = 1

    @classmethod
    def at_start(cls, starts: Sequence[int]) -> "SwarmState":
        return cls(
            positions=list(starts),
            per_uav_visited=[{s} for s in starts],
            global_visited=set(starts),
        )

    def step(self, targets: Sequence[Sequence[int]]) -> bool:
        """Run one epoch; True if any UAV moved."""
        moved = False
        positions = self.positions
        for u, visited in enumerate(self.per_uav_visited):
            target = targets[u][positions[u]]
            # own position is always in visited, so `in positions` only sees other UAVs
            if target < 0 or target in visited or target in positions:
                continue
            positions[u] = target
            visited.add(target)
            self.global_visited.add(target)
            moved = True
        return moved


@dataclass(frozen=True)
class SimResult:
    fitness: int
    covered: bool
    epochs_used: int
    unvisited: int
    max_epochs: int
    # paths[u][e] is UAV u's cell after epoch e (index 0 = start)
    paths: tuple[tuple[Coord, ...], ...] = field(default=(), repr=False)


class PathStep(NamedTuple):
    epoch: int
    src: Coord
    dst: Coord
    direction: Direction


def simulate_targets(
    targets: Sequence[Sequence[int]],
    grid: GridMap,
    n: int,
    record_paths: bool = True,
) -> SimResult:
    """Run the epoch loop on decoded target indices (shape n x V)."""
    table = move_table(grid)
    total = table.size
    limit = max_epochs(grid, n)
    starts = [table.index[cell] for cell in start_positions(grid, n)]
    state = SwarmState.at_start(starts)
    history: list[list[int]] = [list(starts)] if record_paths else []

    def finish(fitness: int, covered: bool) -> SimResult:
        paths: tuple[tuple[Coord, ...], ...] = ()
        if record_paths:
            paths = tuple(
                tuple(table.cells[snapshot[u]] for snapshot in history)
                for u in range(n)
            )
        return SimResult(
            fitness=fitness,
            covered=covered,
            epochs_used=len(history) - 1 if record_paths else state.epoch,
            unvisited=total - len(state.global_visited),
            max_epochs=limit,
            paths=paths,
        )

    if len(state.global_visited) == total:
        state.epoch = 0
        return finish(0, True)

    while state.epoch <= limit:
        moved = state.step(targets)
        if record_paths:
            history.append(list(state.positions))
        if not moved:
            return finish(limit + total - len(state.global_visited), False)
        if len(state.global_visited) == total:
            return finish(state.epoch, True)
        state.epoch += 1

    state.epoch = limit
    return finish(limit + total - len(state.global_visited), False)


def evaluate(genotype: Sequence[float], grid: GridMap, n: int) -> SimResult:
    """Decode genotype into movement maps and simulate the swarm."""
    start_positions(grid, n)
    genes = validate_genotype(genotype, grid, n)
    targets = decode_population(genes, grid, n).tolist()
    return simulate_targets(targets, grid, n)


def population_fitness(population: np.ndarray, grid: GridMap, n: int) -> np.ndarray:
    """Fitness of every row of a (P, n*V) population; paths are not recorded."""
    decoded = decode_population(population, grid, n).tolist()
    return np.fromiter(
        (simulate_targets(targets, grid, n, record_paths=False).fitness for targets in decoded),
        dtype=np.int64,
        count=len(decoded),
    )


def _direction_between(src: Coord, dst: Coord) -> Direction | None:
    for direction in Direction:
        if src.step(direction) == dst:
            return direction
    return None


def extract_paths(result: SimResult) -> list[list[PathStep]]:
    """Per-UAV list of actual moves (non-move epochs omitted)."""
    steps = []
    for path in result.paths:
        moves = []
        for epoch in range(1, len(path)):
            src, dst = path[epoch - 1], path[epoch]
            if src != dst:
                moves.append(PathStep(epoch, src, dst, _direction_between(src, dst)))
        steps.append(moves)
    return steps


def coverage_ratio(result: SimResult, grid: GridMap) -> float:
    total = grid.visitable_count
    return (total - result.unvisited) / total


def visited_sets(result: SimResult) -> list[set[Coord]]:
    return [set(path) for path in result.paths]


def shared_cells(result: SimResult) -> set[Coord]:
    """Cells visited by two or more UAVs."""
    seen: set[Coord] = set()
    shared: set[Coord] = set()
    for cells in visited_sets(result):
        shared |= seen & cells
        seen |= cells
    return shared


def trajectory_violations(result: SimResult, grid: GridMap) -> list[str]:
    """
    Replay the recorded paths and report every broken simulator invariant:
    collisions, illegal moves, self-revisits, and fitness/coverage mismatches.
    An empty list means the trajectory is sound.
    """
    problems: list[str] = []
    n = len(result.paths)
    if n == 0:
        return ["result carries no paths"]

    lengths = {len(path) for path in result.paths}
    if len(lengths) != 1:
        return [f"paths have unequal lengths {sorted(lengths)}"]

    starts = start_positions(grid, n)
    for u, path in enumerate(result.paths):
        if path[0] != starts[u]:
            problems.append(f"UAV {u + 1} starts at {path[0]}, expected {starts[u]}")

    for epoch in range(len(result.paths[0])):
        occupied = [path[epoch] for path in result.paths]
        if len(set(occupied)) != n:
            problems.append(f"collision at epoch {epoch}: {occupied}")

    for u, path in enumerate(result.paths):
        seen = {path[0]}
        for epoch in range(1, len(path)):
            src, dst = path[epoch - 1], path[epoch]
            if src == dst:
                continue
            if not grid.is_visitable(dst) or _direction_between(src, dst) is None:
                problems.append(f"UAV {u + 1} illegal move {src}->{dst} at epoch {epoch}")
            if dst in seen:
                problems.append(f"UAV {u + 1} revisits {dst} at epoch {epoch}")
            seen.add(dst)

    union = set().union(*visited_sets(result))
    unvisited = grid.visitable_count - len(union)
    if unvisited != result.unvisited:
        problems.append(f"unvisited count {result.unvisited} does not match replay ({unvisited})")

    limit = max_epochs(grid, n)
    if result.covered:
        if result.fitness != result.epochs_used:
            problems.append(f"covered fitness {result.fitness} differs from epochs used {result.epochs_used}")
        if grid.visitable_count > n and not theoretical_min_epochs(grid, n) <= result.fitness <= limit:
            problems.append(f"covered fitness {result.fitness} outside bounds")
        if unvisited:
            problems.append("marked covered but cells remain unvisited")
    elif result.fitness != limit + result.unvisited or result.unvisited < 1:
        problems.append(f"uncovered fitness {result.fitness} is not {limit} + {result.unvisited}")

    return problems
