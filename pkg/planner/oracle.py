"""
🔍 Correctness oracles
- reference_evaluate: a plain transliteration of the fitness loop with no
  shared code from planner.sim or planner.codec (only the grid helpers).
- exhaustive_min_epochs: brute force over every joint movement map.
- hamiltonian_path_exists: single-UAV feasibility by backtracking.
All searches are bounded by an OracleBudget and raise instead of truncating.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from planner.errors import BudgetExceededError, ConfigError, GenotypeError, InvalidMapError
from planner.gridmap import (
    Coord,
    GridMap,
    count_color_classes,
    feasible_moves,
    neighbors,
    start_positions,
    visitable_cells,
)
from planner.sim import SimResult
from utils.logger import get_logger

logger = get_logger("oracle")


@dataclass(frozen=True)
class OracleBudget:
    max_joint_policies: int = 2_000_000
    max_states: int = 5_000_000

    def __post_init__(self):
        if self.max_joint_policies < 1 or self.max_states < 1:
            raise ConfigError("oracle budgets must be positive")


def reference_evaluate(genotype: Sequence[float], grid: GridMap, n: int) -> SimResult:
    cells = visitable_cells(grid)
    total = len(cells)
    positions = start_positions(grid, n)
    if len(genotype) != n * total:
        raise GenotypeError(f"genotype length {len(genotype)} != {n * total}")
    for gene in genotype:
        if not (0.0 <= gene <= 1.0):
            raise GenotypeError(f"gene {gene} outside [0, 1]")

    # calculate movement map for each UAV from the genotype
    movement = []
    for u in range(n):
        table = {}
        for i, cell in enumerate(cells):
            options = feasible_moves(grid, cell)
            if len(options) == 0:
                table[cell] = None
                continue
            choice = int(genotype[u * total + i] * len(options))
            if choice >= len(options):
                choice = len(options) - 1
            table[cell] = options[choice]
        movement.append(table)

    limit = 2 * math.ceil((total - n) / n)
    visits = [[p] for p in positions]
    history = [list(positions)]

    def unvisited() -> int:
        count = 0
        for cell in cells:
            if not any(cell in v for v in visits):
                count += 1
        return count

    def result(fitness: int, covered: bool) -> SimResult:
        paths = tuple(tuple(snapshot[u] for snapshot in history) for u in range(n))
        return SimResult(
            fitness=fitness,
            covered=covered,
            epochs_used=len(history) - 1,
            unvisited=unvisited(),
            max_epochs=limit,
            paths=paths,
        )

    if unvisited() == 0:
        return result(0, True)

    epoch = 1
    while epoch <= limit:
        moved = False
        for u in range(n):
            direction = movement[u][positions[u]]
            if direction is None:
                continue
            dr, dc = direction.delta
            target = Coord(positions[u].row + dr, positions[u].col + dc)
            others = [positions[o] for o in range(n) if o != u]
            if target not in visits[u] and target not in others:
                positions[u] = target
                visits[u].append(target)
                moved = True
        history.append(list(positions))
        if not moved:
            return result(limit + unvisited(), False)
        if unvisited() == 0:
            return result(epoch, True)
        epoch += 1
    return result(limit + unvisited(), False)


def joint_policy_count(grid: GridMap, n: int) -> int:
    per_uav = 1
    for cell in visitable_cells(grid):
        per_uav *= max(1, len(feasible_moves(grid, cell)))
    return per_uav ** n


def exhaustive_min_epochs(grid: GridMap, n: int, budget: OracleBudget = OracleBudget()) -> Optional[int]:
    """Minimum covering fitness over every joint movement map; None when nothing covers."""
    space = joint_policy_count(grid, n)
    if space > budget.max_joint_policies:
        logger.warning(f"Exhaustive search on '{grid.id}' with {n} UAVs needs {space} policies")
        raise BudgetExceededError(
            f"{space} joint movement maps exceed the budget of {budget.max_joint_policies}",
            budget.max_joint_policies,
        )

    option_counts = [len(feasible_moves(grid, cell)) for cell in visitable_cells(grid)] * n
    best: Optional[int] = None
    for choice in itertools.product(*(range(max(1, k)) for k in option_counts)):
        genotype = [(c + 0.5) / k if k else 0.0 for c, k in zip(choice, option_counts)]
        outcome = reference_evaluate(genotype, grid, n)
        if outcome.covered and (best is None or outcome.fitness < best):
            best = outcome.fitness
    logger.debug(f"Exhaustive search on '{grid.id}' ({n} UAVs, {space} policies): best={best}")
    return best


def hamiltonian_path_exists(grid: GridMap, start: Coord, budget: OracleBudget = OracleBudget()) -> bool:
    """
    True iff a path from start visits every visitable cell exactly once.

    Checkerboard colouring gives an exact necessary condition up front; the
    backtracking keeps the unvisited region connected and allows at most one
    dead-end cell (it has to be the last one).
    """
    start = Coord(*start)
    if not grid.is_visitable(start):
        raise InvalidMapError(f"start {start} is not a visitable cell")

    total = grid.visitable_count
    even, odd = count_color_classes(grid)
    start_even = (start.row + start.col) % 2 == 0
    if abs(even - odd) > 1:
        return False
    if even != odd and (even > odd) != start_even:
        return False
    if total == 1:
        return True

    adjacency = {cell: neighbors(grid, cell) for cell in visitable_cells(grid)}
    visited = {start}
    states = 0

    def viable(current: Coord) -> bool:
        remaining = [cell for cell in adjacency if cell not in visited]
        if not remaining:
            return True

        # connectivity of the unvisited region as seen from current
        frontier = [c for c in adjacency[current] if c not in visited]
        reached = set(frontier)
        while frontier:
            cell = frontier.pop()
            for nxt in adjacency[cell]:
                if nxt not in visited and nxt not in reached:
                    reached.add(nxt)
                    frontier.append(nxt)
        if len(reached) != len(remaining):
            return False

        dead_ends = 0
        for cell in remaining:
            exits = sum(1 for nxt in adjacency[cell] if nxt not in visited or nxt == current)
            if exits <= 1:
                dead_ends += 1
                if dead_ends > 1:
                    return False
        return True

    def extend(current: Coord) -> bool:
        nonlocal states
        states += 1
        if states > budget.max_states:
            raise BudgetExceededError(
                f"Hamiltonian search on '{grid.id}' exceeded {budget.max_states} states", budget.max_states
            )
        if len(visited) == total:
            return True
        options = [c for c in adjacency[current] if c not in visited]
        # fewest onward exits first
        options.sort(key=lambda c: sum(1 for nxt in adjacency[c] if nxt not in visited))
        for nxt in options:
            visited.add(nxt)
            if viable(nxt) and extend(nxt):
                return True
            visited.remove(nxt)
        return False

    found = viable(start) and extend(start)
    logger.debug(f"Hamiltonian search on '{grid.id}' from {start}: {found} after {states} states")
    return found
