"""
🛩️ Command line tests: exit codes, stdout results and stderr diagnostics
"""
import json

import pytest

from config import Config
from coverage_cli import main
from models.schemas import GaConfig
from planner.gridmap import builtin_map
from planner.render import make_solve_document, write_solve_document


def flat(text):
    """Collapse rich's line wrapping"""
    return " ".join(text.split())


@pytest.fixture
def map_file(tmp_path):
    def write(text, name="room.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def grid_yaml(tmp_path):
    path = tmp_path / "tiny_grid.yaml"
    path.write_text(
        "maps: [map2]\nuav_counts: [2]\npopulation_sizes: [20]\ngeneration_counts: [3]\n"
        "runs_per_cell: 2\nbase_seed: 1\n",
        encoding="utf-8",
    )
    return str(path)


@pytest.fixture
def map6_result(tmp_path, map6_published_genotype, fixed_result):
    grid = builtin_map("map6")
    path = tmp_path / "map6_result.json"
    write_solve_document(make_solve_document(grid, 4, GaConfig(), fixed_result(map6_published_genotype, grid, 4)), path)
    return path


class TestMaps:

    def test_list_shows_bounds(self, capsys):
        assert main(["maps", "list"]) == 0
        out = flat(capsys.readouterr().out)
        assert "9x9" in out and "60" in out
        assert "59/29/19/14" in out and "48/24/16/12" in out

    def test_show_builtin(self, capsys):
        assert main(["maps", "show", "map1"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines() == ["7 7"] + ["......."] * 7

    def test_show_unknown(self, capsys):
        assert main(["maps", "show", "map9"]) == 1
        assert "map9" in capsys.readouterr().err

    def test_validate_good_file(self, map_file, capsys):
        assert main(["validate", map_file("3 3\n...\n.#.\n...\n")]) == 0
        out = flat(capsys.readouterr().out)
        assert "Visitable cells (V): 8" in out
        assert "Lower bound, 4 UAV(s): 1" in out

    def test_validate_corner_obstacle(self, map_file, capsys):
        assert main(["validate", map_file("2 2\n#.\n..\n")]) == 1
        err = flat(capsys.readouterr().err)
        assert "corner" in err and "line 2, column 1" in err

    def test_validate_missing_file(self, tmp_path):
        assert main(["validate", str(tmp_path / "absent.txt")]) == 1

    @pytest.mark.parametrize("command", [["validate"], ["solve", "-n", "1", "--map"]])
    def test_undecodable_map_is_input_error(self, tmp_path, capsys, command):
        path = tmp_path / "garbled.txt"
        path.write_bytes(b"2 2\n.\xff\n..")
        assert main(command + [str(path)]) == 1
        err = flat(capsys.readouterr().err)
        assert "UTF-8" in err and "line 2, column 2" in err

    def test_superscript_header_is_input_error(self, map_file, capsys):
        assert main(["validate", map_file("\u00b2 2\n..\n..\n")]) == 1
        assert "bad header" in flat(capsys.readouterr().err)


class TestSolve:

    def test_every_cell_a_start(self, map_file, tmp_path, capsys):
        out = tmp_path / "free.json"
        code = main(["solve", "--map", map_file("2 2\n..\n..\n"), "--uavs", "4", "--pop", "4", "--gens", "2", "--out", str(out)])
        assert code == 0
        assert "covered in 0 epochs" in capsys.readouterr().out
        assert json.loads(out.read_text(encoding="utf-8"))["fitness"] == 0

    def test_same_seed_same_file(self, map_file, tmp_path):
        room = map_file("2 3\n...\n...\n")
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        args = ["solve", "-m", room, "-n", "2", "--pop", "20", "--gens", "10", "--seed", "4"]
        assert main(args + ["--out", str(first)]) in (0, 3)
        assert main(args + ["--out", str(second)]) in (0, 3)
        assert first.read_bytes() == second.read_bytes()

    def test_not_covered_exit_code(self, tmp_path, capsys):
        out = tmp_path / "map6.json"
        assert main(["solve", "-m", "map6", "-n", "1", "--pop", "10", "--gens", "2", "--out", str(out)]) == 3
        captured = capsys.readouterr()
        assert "not covered" in captured.out
        assert '"population_size": 10' in flat(captured.err)
        assert out.exists()

    def test_default_output_location(self, map_file, tmp_path, monkeypatch):
        monkeypatch.setattr(Config, "RESULTS_DIR", str(tmp_path / "results"))
        assert main(["solve", "-m", map_file("2 2\n..\n..\n"), "-n", "4", "--pop", "4", "--gens", "1", "--seed", "2"]) == 0
        assert (tmp_path / "results" / "solve_room_4uav_seed2.json").exists()

    @pytest.mark.parametrize("args", [
        ["-m", "map9"],
        ["-m", "map1", "--pop", "1"],
        ["-m", "map1", "-n", "5"],
        ["-m", "map1", "--crossover-rate", "2"],
    ])
    def test_input_errors(self, args):
        assert main(["solve"] + args) == 1

    def test_too_many_uavs_for_strip(self, map_file):
        assert main(["solve", "-m", map_file("1 3\n...\n"), "-n", "2"]) == 1


class TestGridSearchAndReport:

    def test_run_resume_and_report(self, grid_yaml, tmp_path, capsys):
        records = tmp_path / "records.jsonl"
        assert main(["grid-search", grid_yaml, "--out", str(records), "--workers", "1", "--quiet"]) == 0
        assert "2 runs executed, 0 already recorded" in flat(capsys.readouterr().out)
        assert len(records.read_text(encoding="utf-8").splitlines()) == 3

        assert main(["grid-search", grid_yaml, "--out", str(records), "--quiet"]) == 0
        assert "0 runs executed, 2 already recorded" in flat(capsys.readouterr().out)

        assert main(["grid-search", grid_yaml, "--out", str(records), "--no-resume", "--quiet"]) == 1
        capsys.readouterr()

        assert main(["report", str(records), "--table", "success", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "map_id,uavs,population_size,generations,runs,covered,percent"
        assert lines[1].startswith("map2,2,20,3,2,")

        assert main(["report", str(records), "-t", "min-epochs", "-f", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert [(row["map_id"], row["uavs"]) for row in rows] == [("map2", 2)]

        assert main(["report", str(records), "--reference"]) == 0
        out = capsys.readouterr().out
        assert "Comparison with the RL baseline" in out and "Published" in out

    def test_bad_experiment_file(self, tmp_path, capsys):
        path = tmp_path / "bad.yaml"
        path.write_text("maps: [map1]\nruns_per_cell: 0\n", encoding="utf-8")
        assert main(["grid-search", str(path), "--out", str(tmp_path / "r.jsonl"), "--quiet"]) == 1
        assert "line 2" in flat(capsys.readouterr().err)

    def test_report_without_records(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text('{"format": "uav-coverage-records", "version": 1}\n', encoding="utf-8")
        assert main(["report", str(empty)]) == 1
        assert main(["report", str(tmp_path / "absent.jsonl")]) == 1

    def test_report_unknown_table(self, tmp_path):
        assert main(["report", str(tmp_path / "records.jsonl"), "--table", "histogram"]) == 1


class TestRender:

    def test_ascii(self, map6_result, capsys):
        assert main(["render", str(map6_result)]) == 0
        out = capsys.readouterr().out
        assert [line for line in out.splitlines() if line.startswith("UAV ")][3].startswith("UAV 4: start (8,8)")
        assert out.rstrip().endswith("covered in 15 epochs (bound 14)")

    def test_ascii_only(self, map6_result, capsys):
        assert main(["render", str(map6_result), "--ascii-only"]) == 0
        out = capsys.readouterr().out
        assert "(>)" in out and "→" not in out

    def test_svg_files(self, map6_result, tmp_path):
        assert main(["render", str(map6_result), "--format", "svg", "--out", str(tmp_path / "svg")]) == 0
        assert sorted(p.name for p in (tmp_path / "svg").iterdir()) == [
            f"map6_result_uav{u}.svg" for u in range(1, 5)
        ]

    def test_svg_stdout(self, map6_result, capsys):
        assert main(["render", str(map6_result), "-f", "svg"]) == 0
        assert capsys.readouterr().out.count("<svg") == 4

    def test_tampered_document(self, map6_result, capsys):
        data = json.loads(map6_result.read_text(encoding="utf-8"))
        data["paths"][0][1] = [5, 5]
        map6_result.write_text(json.dumps(data), encoding="utf-8")
        assert main(["render", str(map6_result)]) == 1
        assert "does not replay" in flat(capsys.readouterr().err)


class TestOracleCommands:

    def test_hamiltonian(self, capsys):
        assert main(["oracle", "hamiltonian", "--map", "map1"]) == 0
        assert "yes" in capsys.readouterr().out
        assert main(["oracle", "hamiltonian", "--map", "map2"]) == 0
        assert "no" in capsys.readouterr().out

    def test_hamiltonian_bad_start(self):
        assert main(["oracle", "hamiltonian", "--map", "map6", "--row", "1", "--col", "3"]) == 1

    def test_exhaustive(self, map_file, capsys):
        assert main(["oracle", "exhaustive", "--map", map_file("2 2\n..\n..\n")]) == 0
        assert "minimum epochs: 3" in capsys.readouterr().out

    def test_exhaustive_budget_is_runtime_error(self):
        assert main(["oracle", "exhaustive", "--map", "map1", "--max-policies", "2"]) == 2

    def test_hidden_from_help(self, capsys):
        assert main(["--help"]) == 0
        out = capsys.readouterr().out
        assert "grid-search" in out and "oracle" not in out
