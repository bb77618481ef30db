"""
🧪 Experiment harness
Runs the (map × UAV count × population × generations × run) grid, one seeded
GA run per cell repetition, and persists every outcome as a JSON line.

Seeds are derived per run from a stable hash, so a partial, resumed or
parallel grid produces exactly the same records as a sequential one.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing as mp
from pathlib import Path
from typing import Callable, Iterable, Iterator, NamedTuple, Optional

import yaml
from pydantic import ValidationError

from models.schemas import (
    RECORDS_FORMAT,
    RECORDS_VERSION,
    ExperimentGrid,
    GaConfig,
    GaOverrides,
    RecordsHeader,
    RunRecord,
)
from planner.errors import ConfigError, CoverageError, RecordsFormatError, SinkWriteError
from planner.evolve import run_ga
from planner.gridmap import BUILTIN_MAP_IDS, GridMap, load_map, start_positions
from utils.logger import get_logger, setup_logging

logger = get_logger("harness")


class RunSpec(NamedTuple):
    map_id: str
    uavs: int
    population_size: int
    generations: int
    run_index: int
    seed: int


def run_seed(base_seed: int, map_id: str, uavs: int, population_size: int, generations: int, run_index: int) -> int:
    """64-bit seed from a blake2b digest of the run coordinates."""
    key = f"{base_seed}|{map_id}|{uavs}|{population_size}|{generations}|{run_index}"
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def plan_runs(grid: ExperimentGrid, map_ids: Optional[Iterable[str]] = None) -> list[RunSpec]:
    """Every run of the grid in a fixed order: map, uavs, population, generations, run index."""
    ids = list(map_ids) if map_ids is not None else list(grid.maps)
    return [
        RunSpec(map_id, uavs, pop, gens, run, run_seed(grid.base_seed, map_id, uavs, pop, gens, run))
        for map_id in ids
        for uavs in grid.uav_counts
        for pop in grid.population_sizes
        for gens in grid.generation_counts
        for run in range(grid.runs_per_cell)
    ]


def ga_config_for(spec: RunSpec, overrides: GaOverrides) -> GaConfig:
    pinned = overrides.model_dump(exclude_none=True)
    try:
        return GaConfig(
            population_size=spec.population_size,
            generations=spec.generations,
            seed=spec.seed,
            **pinned,
        )
    except ValidationError as e:
        raise ConfigError(
            f"GA settings invalid for population {spec.population_size}: {e.errors()[0]['msg']}"
        ) from e


def resolve_grid_maps(grid: ExperimentGrid, base_dir: Optional[Path] = None) -> dict[str, GridMap]:
    """Load every map the grid names; file paths are taken relative to base_dir."""
    maps: dict[str, GridMap] = {}
    for ref in grid.maps:
        target = ref
        if ref not in BUILTIN_MAP_IDS and base_dir is not None and not Path(ref).is_absolute():
            target = str(base_dir / ref)
        try:
            grid_map = load_map(target)
        except CoverageError as e:
            raise ConfigError(f"map '{ref}' cannot be loaded: {e}") from e
        if grid_map.id in maps:
            raise ConfigError(f"two maps share the id '{grid_map.id}'")
        for n in grid.uav_counts:
            try:
                start_positions(grid_map, n)
            except CoverageError as e:
                raise ConfigError(f"map '{grid_map.id}' with {n} UAVs: {e}") from e
        maps[grid_map.id] = grid_map
    return maps


def execute_run(spec: RunSpec, grid_map: GridMap, overrides: GaOverrides) -> RunRecord:
    """One seeded GA run. Timing covers run_ga only."""
    result = run_ga(ga_config_for(spec, overrides), grid_map, spec.uavs)
    covered = result.best_sim.covered
    return RunRecord(
        map_id=spec.map_id,
        uavs=spec.uavs,
        population_size=spec.population_size,
        generations=spec.generations,
        run_index=spec.run_index,
        seed=spec.seed,
        covered=covered,
        best_fitness=result.best_fitness,
        best_epochs=result.best_fitness if covered else None,
        wall_time_seconds=round(result.wall_time, 6),
    )


# Records file

class JsonlRecordSink:
    """
    Append-only records file. A new file starts with the format header; an
    existing one must carry a matching header. A trailing partial line left
    by an interrupted run is cut off before appending.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._handle = None
        self.written = 0

    def __enter__(self) -> "JsonlRecordSink":
        self.open()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def open(self) -> None:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fresh = not self.path.exists() or self.path.stat().st_size == 0
            if not fresh:
                _read_header(self.path)
                self._drop_partial_tail()
            self._handle = self.path.open("a", encoding="utf-8", newline="\n")
            if fresh:
                self._handle.write(RecordsHeader().model_dump_json() + "\n")
                self._handle.flush()
        except OSError as e:
            raise SinkWriteError(f"cannot open records file {self.path}: {e}") from e

    def _drop_partial_tail(self) -> None:
        data = self.path.read_bytes()
        if data.endswith(b"\n"):
            return
        keep = data.rfind(b"\n") + 1
        logger.warning(f"Dropping {len(data) - keep} bytes of incomplete record at the end of {self.path}")
        with self.path.open("r+b") as f:
            f.truncate(keep)

    def append(self, record: RunRecord) -> None:
        if self._handle is None:
            raise SinkWriteError("records sink is not open")
        try:
            self._handle.write(record.model_dump_json() + "\n")
            self._handle.flush()
        except OSError as e:
            raise SinkWriteError(f"failed to append record to {self.path}: {e}") from e
        self.written += 1

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


def _read_header(path: Path) -> None:
    with path.open("r", encoding="utf-8") as f:
        first = f.readline()
    try:
        header = json.loads(first)
    except json.JSONDecodeError as e:
        raise RecordsFormatError(f"{path} does not start with a records header", line=1) from e
    if not isinstance(header, dict) or header.get("format") != RECORDS_FORMAT:
        raise RecordsFormatError(f"{path} is not a '{RECORDS_FORMAT}' file", line=1)
    if header.get("version") != RECORDS_VERSION:
        raise RecordsFormatError(
            f"records version {header.get('version')} is not supported (expected {RECORDS_VERSION})", line=1
        )


def read_records(path: str | Path) -> list[RunRecord]:
    path = Path(path)
    if not path.is_file():
        raise RecordsFormatError(f"records file {path} does not exist")
    if path.stat().st_size == 0:
        return []
    _read_header(path)

    records = []
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    complete = text.endswith("\n")
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            records.append(RunRecord.model_validate_json(line))
        except ValidationError as e:
            if number == len(lines) and not complete:
                logger.warning(f"Ignoring incomplete last record in {path}")
                break
            raise RecordsFormatError(f"malformed record: {e.errors()[0]['msg']}", line=number) from e
    return records


# Experiment files

def _key_lines(text: str) -> dict[str, int]:
    """1-based line of each top-level key of a YAML mapping."""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {key.value: key.start_mark.line + 1 for key, _ in node.value if isinstance(key, yaml.ScalarNode)}


def load_experiment_grid(path: str | Path) -> ExperimentGrid:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read experiment file {path}: {e}") from e

    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {getattr(e, 'problem', e)}", line=mark.line + 1 if mark else None) from e

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("experiment file must be a mapping of grid settings", line=1)

    try:
        grid = ExperimentGrid.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error["loc"] else ""
        location = ".".join(str(part) for part in error["loc"])
        raise ConfigError(f"{location}: {error['msg']}", line=_key_lines(text).get(key)) from e

    logger.info(f"Loaded experiment grid from {path}: {grid.total_runs} runs")
    return grid


# Execution

def _init_worker(log_level: Optional[str]) -> None:
    setup_logging(log_level=log_level, to_file=False)


def _run_task(task: tuple[RunSpec, GridMap, GaOverrides]) -> RunRecord:
    return execute_run(*task)


def run_grid(
    grid: ExperimentGrid,
    sink: Optional[JsonlRecordSink] = None,
    workers: int = 1,
    base_dir: Optional[Path] = None,
    skip_seeds: Optional[set[int]] = None,
    log_level: Optional[str] = None,
    on_plan: Optional[Callable[[int, int], None]] = None,
) -> Iterator[RunRecord]:
    """
    Execute the grid, yielding each record once it has been appended to sink.
    Runs whose seed is in skip_seeds are not executed again. Completion order
    depends on scheduling; the set of records does not.
    """
    maps = resolve_grid_maps(grid, base_dir)
    specs = plan_runs(grid, maps.keys())
    for spec in {(s.population_size, s.generations): s for s in specs}.values():
        ga_config_for(spec, grid.ga)

    skip_seeds = skip_seeds or set()
    pending = [spec for spec in specs if spec.seed not in skip_seeds]
    logger.info(f"Grid planned: {len(specs)} runs, {len(specs) - len(pending)} already recorded, {len(pending)} to execute")
    if on_plan:
        on_plan(len(specs), len(specs) - len(pending))

    tasks = [(spec, maps[spec.map_id], grid.ga) for spec in pending]

    def emit(record: RunRecord) -> RunRecord:
        if sink is not None:
            sink.append(record)
        return record

    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            yield emit(_run_task(task))
        return

    with mp.Pool(processes=workers, initializer=_init_worker, initargs=(log_level,)) as pool:
        for record in pool.imap_unordered(_run_task, tasks):
            yield emit(record)


def recorded_seeds(records: Iterable[RunRecord]) -> set[int]:
    return {record.seed for record in records}
