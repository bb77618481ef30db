"""
🧬 Genotype codec tests
"""
import numpy as np
import pytest

from planner.codec import (
    MovementMap,
    build_movement_maps,
    decode_gene,
    decode_population,
    encode_movement_maps,
    genotype_length,
    movement_map_rows,
    validate_genotype,
)
from planner.errors import GenotypeError
from planner.gridmap import BUILTIN_MAP_IDS, Coord, Direction, builtin_map, move_table, parse_map


class TestDecodeGene:

    @pytest.mark.parametrize("g, k, expected", [
        (0.6, 4, 2),
        (0.0, 1, 0),
        (0.0, 4, 0),
        (1.0, 3, 2),
        (0.999999, 2, 1),
        (0.5, 2, 1),
    ])
    def test_intervals(self, g, k, expected):
        assert decode_gene(g, k) == expected

    @pytest.mark.parametrize("g, k", [(-0.01, 2), (1.01, 2), (float("nan"), 2), (0.5, 0)])
    def test_rejects(self, g, k):
        with pytest.raises(GenotypeError):
            decode_gene(g, k)


class TestMovementMaps:

    def test_genotype_length(self, free_2x2):
        assert genotype_length(builtin_map("map1"), 1) == 49
        assert genotype_length(builtin_map("map6"), 4) == 240
        assert genotype_length(free_2x2, 1) == 4

    def test_all_zero_picks_first_feasible(self):
        grid = builtin_map("map1")
        (mm,) = build_movement_maps(np.zeros(49), grid, 1)
        table = move_table(grid)
        for cell, direction in zip(table.cells, mm.directions):
            assert direction == table.moves[table.index[cell]][0]
        assert mm.at(grid, Coord(0, 0)) == Direction.DOWN
        assert mm.at(grid, Coord(3, 3)) == Direction.UP

    def test_high_genes_pick_last_feasible(self, free_2x2):
        (mm,) = build_movement_maps([0.99] * 4, free_2x2, 1)
        assert mm.directions == (Direction.RIGHT, Direction.LEFT, Direction.RIGHT, Direction.LEFT)

    def test_isolated_cell_has_no_move(self):
        grid = parse_map("3 3\n.#.\n#.#\n.#.")
        (mm,) = build_movement_maps([0.3] * 5, grid, 1)
        assert mm.directions == (None,) * 5
        assert decode_population(np.full(5, 0.3), grid, 1).tolist() == [[-1] * 5]

    def test_uav_major_layout(self, free_2x2):
        genes = [0.0] * 4 + [0.99] * 4
        first, second = build_movement_maps(genes, free_2x2, 2)
        assert first.directions[0] == Direction.DOWN
        assert second.directions[0] == Direction.RIGHT

    def test_wrong_length_and_range(self, free_2x2):
        with pytest.raises(GenotypeError):
            validate_genotype([0.5] * 3, free_2x2, 1)
        with pytest.raises(GenotypeError):
            validate_genotype([0.5, 0.5, 1.5, 0.5], free_2x2, 1)
        with pytest.raises(GenotypeError):
            build_movement_maps([0.5] * 4, free_2x2, 2)

    def test_encode_inverts_build(self, rng):
        for name in BUILTIN_MAP_IDS:
            grid = builtin_map(name)
            for n in (1, 4):
                maps = build_movement_maps(rng.random(genotype_length(grid, n)), grid, n)
                assert build_movement_maps(encode_movement_maps(maps, grid), grid, n) == maps

    def test_encode_rejects_infeasible_direction(self, free_2x2):
        with pytest.raises(GenotypeError):
            encode_movement_maps([{Coord(0, 0): Direction.UP}], free_2x2)

    def test_rows_render_glyphs(self, strip):
        mm = MovementMap((Direction.RIGHT, Direction.RIGHT, Direction.LEFT))
        assert movement_map_rows(mm, strip) == ["→→←"]
        assert movement_map_rows(mm, strip, ascii_only=True) == [">><"]
        grid = builtin_map("map6")
        (mm6,) = build_movement_maps(np.zeros(60), grid, 1)
        assert "".join(movement_map_rows(mm6, grid)).count("#") == 21


class TestVectorisedDecode:

    def test_matches_scalar_decode_fuzz(self, rng):
        # 10,000 genotypes spread over every built-in map and UAV count
        for name in BUILTIN_MAP_IDS:
            grid = builtin_map(name)
            table = move_table(grid)
            for n in range(1, 5):
                population = rng.random((416, genotype_length(grid, n)))
                population[:8] = rng.choice([0.0, 1.0], size=(8, population.shape[1]))
                decoded = decode_population(population, grid, n)
                assert decoded.shape == (416, n, table.size)
                for genes, targets in zip(population[::52], decoded[::52]):
                    for u, mm in enumerate(build_movement_maps(genes, grid, n)):
                        expected = [
                            table.index[cell.step(d)] if d is not None else -1
                            for cell, d in zip(table.cells, mm.directions)
                        ]
                        assert targets[u].tolist() == expected
                valid = decoded[decoded >= 0]
                assert valid.size and valid.max() < table.size
