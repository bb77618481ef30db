"""
🛩️ Simulator and fitness tests
"""
import numpy as np
import pytest

from planner.codec import encode_movement_maps, genotype_length
from planner.gridmap import BUILTIN_MAP_IDS, Coord, Direction, builtin_map, max_epochs, theoretical_min_epochs
from planner.oracle import reference_evaluate
from planner.sim import (
    PathStep,
    SimResult,
    coverage_ratio,
    evaluate,
    extract_paths,
    population_fitness,
    shared_cells,
    trajectory_violations,
)

RIGHT, LEFT = Direction.RIGHT, Direction.LEFT


class TestStripExamples:
    """1x3 strip: the smallest interesting cases"""

    def test_all_right_covers_in_two(self, strip):
        genes = encode_movement_maps([{Coord(0, 0): RIGHT, Coord(0, 1): RIGHT}], strip)
        result = evaluate(genes, strip, 1)
        assert result.covered and result.fitness == 2
        assert result.paths == ((Coord(0, 0), Coord(0, 1), Coord(0, 2)),)
        assert coverage_ratio(result, strip) == 1.0
        assert extract_paths(result) == [[
            PathStep(1, Coord(0, 0), Coord(0, 1), RIGHT),
            PathStep(2, Coord(0, 1), Coord(0, 2), RIGHT),
        ]]

    def test_self_visited_target_stalls(self, strip):
        genes = encode_movement_maps([{Coord(0, 0): RIGHT, Coord(0, 1): LEFT}], strip)
        result = evaluate(genes, strip, 1)
        assert not result.covered
        assert result.max_epochs == 4
        assert result.fitness == 5
        assert result.unvisited == 1
        assert result.epochs_used == 2
        assert coverage_ratio(result, strip) == pytest.approx(2 / 3)
        assert len(extract_paths(result)[0]) == 1

    def test_starts_cover_everything(self, free_2x2):
        result = evaluate(np.full(16, 0.5), free_2x2, 4)
        assert result.covered and result.fitness == 0 and result.epochs_used == 0


class TestFixtures:
    """Hand-built movement maps with known outcomes"""

    def test_map1_single_uav_boustrophedon(self, map1_single_genotype):
        grid = builtin_map("map1")
        result = evaluate(map1_single_genotype, grid, 1)
        assert result.covered and result.fitness == 48
        assert trajectory_violations(result, grid) == []

    def test_map1_two_uavs_reach_bound(self, map1_pair_genotype):
        grid = builtin_map("map1")
        result = evaluate(map1_pair_genotype, grid, 2)
        assert result.covered
        assert result.fitness == theoretical_min_epochs(grid, 2) == 24
        assert trajectory_violations(result, grid) == []

    def test_map6_published_maps(self, map6_published_genotype):
        grid = builtin_map("map6")
        result = evaluate(map6_published_genotype, grid, 4)
        assert result.covered
        assert result.fitness == 15
        assert trajectory_violations(result, grid) == []
        assert shared_cells(result) == {Coord(1, 1), Coord(1, 7), Coord(7, 7), Coord(7, 1)}

    def test_starts_only_ratio(self):
        grid = builtin_map("map6")
        stalled = SimResult(fitness=28 + 56, covered=False, epochs_used=0, unvisited=56, max_epochs=28)
        assert coverage_ratio(stalled, grid) == pytest.approx(4 / 60)


class TestInvariants:
    """Random genotypes over every built-in map and UAV count"""

    @pytest.mark.parametrize("name", BUILTIN_MAP_IDS)
    def test_trajectory_fuzz(self, name, rng):
        grid = builtin_map(name)
        for n in range(1, 5):
            limit = max_epochs(grid, n)
            bound = theoretical_min_epochs(grid, n)
            for genes in rng.random((420, genotype_length(grid, n))):
                result = evaluate(genes, grid, n)
                assert trajectory_violations(result, grid) == []
                assert result.epochs_used <= limit
                if result.covered:
                    assert bound <= result.fitness <= limit
                else:
                    assert limit + 1 <= result.fitness <= limit + grid.visitable_count - n
                if n == 1 and result.covered:
                    assert result.fitness == grid.visitable_count - 1

    def test_evaluation_is_deterministic(self, rng):
        grid = builtin_map("map4")
        genes = rng.random(genotype_length(grid, 3))
        assert evaluate(genes, grid, 3) == evaluate(genes.copy(), grid, 3)

    def test_population_fitness_matches_evaluate(self, rng):
        grid = builtin_map("map5")
        population = rng.random((64, genotype_length(grid, 3)))
        expected = [evaluate(genes, grid, 3).fitness for genes in population]
        assert population_fitness(population, grid, 3).tolist() == expected

    def test_violations_catch_illegal_jump(self, strip):
        broken = SimResult(
            fitness=1, covered=True, epochs_used=1, unvisited=0, max_epochs=4,
            paths=((Coord(0, 0), Coord(0, 2)),),
        )
        assert trajectory_violations(broken, strip)


class TestOracleAgreement:
    """The fast simulator against the plain transliteration"""

    @pytest.mark.parametrize("name", BUILTIN_MAP_IDS)
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_differential(self, name, n):
        grid = builtin_map(name)
        rng = np.random.default_rng(BUILTIN_MAP_IDS.index(name) * 10 + n)
        population = rng.random((1000, genotype_length(grid, n)))
        # skew a slice towards the interval edges
        population[:100] = np.round(population[:100])
        for genes in population:
            fast = evaluate(genes, grid, n)
            slow = reference_evaluate(genes.tolist(), grid, n)
            assert fast == slow

    def test_fixtures_agree(self, map6_published_genotype, map1_pair_genotype):
        assert evaluate(map6_published_genotype, builtin_map("map6"), 4) == reference_evaluate(
            map6_published_genotype.tolist(), builtin_map("map6"), 4
        )
        assert evaluate(map1_pair_genotype, builtin_map("map1"), 2) == reference_evaluate(
            map1_pair_genotype.tolist(), builtin_map("map1"), 2
        )
