"""
Test configuration: sets env vars at module load time, before config is
imported (its class attributes read them once).
"""
import os
import tempfile

import numpy as np
import pytest

# ── Keep log files and default outputs out of the working tree ───────────────
_tmpdir = tempfile.mkdtemp(prefix="uav-coverage-tests-")

os.environ["UAV_COVERAGE_LOG_DIR"] = os.path.join(_tmpdir, "logs")
os.environ["UAV_COVERAGE_LOG_LEVEL"] = "WARNING"
os.environ["UAV_COVERAGE_RESULTS_DIR"] = os.path.join(_tmpdir, "results")
os.environ["UAV_COVERAGE_RECORDS_PATH"] = os.path.join(_tmpdir, "results", "records.jsonl")
os.environ["UAV_COVERAGE_WORKERS"] = "1"
os.environ["UAV_COVERAGE_ENV"] = "development"

from planner.codec import encode_movement_maps  # noqa: E402
from planner.evolve import GaRunResult  # noqa: E402
from planner.gridmap import Coord, Direction, builtin_map, parse_map  # noqa: E402
from planner.sim import evaluate  # noqa: E402

U, D, L, R = Direction.UP, Direction.DOWN, Direction.LEFT, Direction.RIGHT


def _serpentine_rows(rows, cols, first_row=0, last_row=None):
    """Left-right boustrophedon over whole rows, starting at (first_row, 0)."""
    last_row = rows - 1 if last_row is None else last_row
    moves = {}
    for r in range(first_row, last_row + 1):
        forward = (r - first_row) % 2 == 0
        span = range(cols - 1) if forward else range(cols - 1, 0, -1)
        for c in span:
            moves[Coord(r, c)] = R if forward else L
        if r < last_row:
            moves[Coord(r, cols - 1 if forward else 0)] = D
    return moves


# Four-UAV movement maps published for map 6 (covering in 15 epochs)
MAP6_PUBLISHED = [
    {(0, 0): R, (0, 1): D, (1, 1): R, (1, 2): U, (0, 2): R, (0, 3): R, (0, 4): R, (0, 5): R,
     (0, 6): D, (1, 6): R, (1, 7): D, (2, 7): L, (2, 6): D, (3, 6): L, (3, 5): U, (2, 5): R},
    {(8, 0): R, (8, 1): U, (7, 1): L, (7, 0): U, (6, 0): U, (5, 0): U, (4, 0): U, (3, 0): U,
     (2, 0): U, (1, 0): R, (1, 1): D, (2, 1): R, (2, 2): R, (2, 3): D, (3, 3): L, (3, 2): R},
    {(0, 8): L, (0, 7): D, (1, 7): R, (1, 8): D, (2, 8): D, (3, 8): D, (4, 8): D, (5, 8): D,
     (6, 8): D, (7, 8): L, (7, 7): U, (6, 7): L, (6, 6): L, (6, 5): U, (5, 5): R, (5, 6): D},
    {(8, 8): L, (8, 7): U, (7, 7): L, (7, 6): D, (8, 6): L, (8, 5): L, (8, 4): L, (8, 3): L,
     (8, 2): U, (7, 2): L, (7, 1): U, (6, 1): R, (6, 2): U, (5, 2): R, (5, 3): D, (6, 3): U},
]


@pytest.fixture
def strip():
    """1x3 free strip"""
    return parse_map("1 3\n...\n", map_id="strip")


@pytest.fixture
def free_2x2():
    return parse_map("2 2\n..\n..\n", map_id="free2x2")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def map1_single_genotype():
    """Boustrophedon over map 1 for one UAV: covers in 48 epochs"""
    grid = builtin_map("map1")
    return encode_movement_maps([_serpentine_rows(7, 7)], grid)


@pytest.fixture
def map1_pair_genotype():
    """Two UAVs splitting map 1 (rows 0-3 right part / rows 3-6 rest): covers in 24 epochs"""
    grid = builtin_map("map1")
    top = _serpentine_rows(7, 7, 0, 2)
    top.update({Coord(2, 6): D, Coord(3, 6): L, Coord(3, 5): L, Coord(3, 4): L})
    bottom_path = [
        (6, 0), (5, 0), (4, 0), (3, 0), (3, 1), (3, 2), (4, 2), (4, 1), (5, 1), (6, 1), (6, 2), (5, 2),
        (5, 3), (6, 3), (6, 4), (6, 5), (6, 6), (5, 6), (4, 6), (4, 5), (5, 5), (5, 4), (4, 4), (4, 3),
    ]
    bottom = {}
    for src, dst in zip(bottom_path, bottom_path[1:]):
        delta = (dst[0] - src[0], dst[1] - src[1])
        bottom[Coord(*src)] = next(d for d in Direction if d.delta == delta)
    return encode_movement_maps([top, bottom], grid)


@pytest.fixture
def map6_published_genotype():
    grid = builtin_map("map6")
    return encode_movement_maps(
        [{Coord(*cell): direction for cell, direction in uav.items()} for uav in MAP6_PUBLISHED],
        grid,
    )


@pytest.fixture
def fixed_result():
    """Wrap a hand-built genotype in a GaRunResult, as if the GA had found it"""
    def build(genotype, grid, n):
        sim = evaluate(genotype, grid, n)
        return GaRunResult(
            best_genotype=np.asarray(genotype, dtype=float),
            best_fitness=sim.fitness,
            best_sim=sim,
            generations_executed=1,
            fitness_history=[sim.fitness],
            wall_time=0.0,
        )
    return build
