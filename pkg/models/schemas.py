"""
Pydantic models for everything the planner reads from or writes to disk
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

RECORDS_FORMAT = "uav-coverage-records"
RECORDS_VERSION = 1
SOLVE_FORMAT = "uav-coverage-solve"

# two_point cuts each UAV's movement map at its own pair of points
CrossoverKind = Literal["two_point", "uniform"]


# GA configuration

class GaConfig(BaseModel):
    """Hyperparameters of one GA run"""
    model_config = ConfigDict(extra="forbid")

    population_size: int = Field(default=1000, ge=2)
    generations: int = Field(default=100, ge=1)
    crossover: CrossoverKind = "two_point"
    crossover_rate: float = Field(default=0.9, ge=0.0, le=1.0)
    # None resolves to min(1.25 * n, 2.5) / L for n UAVs and genotype length L
    mutation_rate: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    # left unset, shrinks to the population on tiny runs
    tournament_size: int = Field(default=5, ge=1)
    elitism: int = Field(default=1, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    early_stop_at_lower_bound: bool = True

    @model_validator(mode="after")
    def _check_sizes(self) -> "GaConfig":
        if "tournament_size" not in self.model_fields_set:
            self.tournament_size = min(self.tournament_size, self.population_size)
        if self.tournament_size > self.population_size:
            raise ValueError(
                f"tournament_size {self.tournament_size} exceeds population_size {self.population_size}"
            )
        if self.elitism >= self.population_size:
            raise ValueError(f"elitism {self.elitism} must be smaller than population_size {self.population_size}")
        return self


class GaOverrides(BaseModel):
    """GA settings an experiment file may pin for every run of the grid"""
    model_config = ConfigDict(extra="forbid")

    crossover: Optional[CrossoverKind] = None
    crossover_rate: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    mutation_rate: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    tournament_size: Optional[int] = Field(default=None, ge=1)
    elitism: Optional[int] = Field(default=None, ge=0)
    early_stop_at_lower_bound: bool = False


# Experiment grid

class ExperimentGrid(BaseModel):
    """Cartesian product of map configurations and GA sizes, repeated runs_per_cell times"""
    model_config = ConfigDict(extra="forbid")

    maps: List[str] = Field(default_factory=lambda: ["map1", "map2", "map3", "map4", "map5", "map6"], min_length=1)
    uav_counts: List[int] = Field(default_factory=lambda: [1, 2, 3, 4], min_length=1)
    population_sizes: List[int] = Field(default_factory=lambda: [1000, 2000, 3000, 4000, 5000], min_length=1)
    generation_counts: List[int] = Field(default_factory=lambda: [100, 200, 300, 400, 500], min_length=1)
    runs_per_cell: int = Field(default=50, ge=1)
    base_seed: int = Field(default=0, ge=0, lt=2**64)
    ga: GaOverrides = Field(default_factory=GaOverrides)

    @field_validator("uav_counts")
    @classmethod
    def _check_uavs(cls, value: List[int]) -> List[int]:
        if any(not 1 <= n <= 4 for n in value):
            raise ValueError("uav_counts must lie in 1..4")
        return value

    @field_validator("population_sizes")
    @classmethod
    def _check_populations(cls, value: List[int]) -> List[int]:
        if any(p < 2 for p in value):
            raise ValueError("population_sizes must be at least 2")
        return value

    @field_validator("generation_counts")
    @classmethod
    def _check_generations(cls, value: List[int]) -> List[int]:
        if any(g < 1 for g in value):
            raise ValueError("generation_counts must be at least 1")
        return value

    @property
    def total_runs(self) -> int:
        return (
            len(self.maps) * len(self.uav_counts) * len(self.population_sizes)
            * len(self.generation_counts) * self.runs_per_cell
        )


# Run records (one JSON line each; field order is the file format)

class RecordsHeader(BaseModel):
    format: str = RECORDS_FORMAT
    version: int = RECORDS_VERSION


class RunRecord(BaseModel):
    """Persisted outcome of one seeded GA run"""
    map_id: str
    uavs: int = Field(ge=1, le=4)
    population_size: int
    generations: int
    run_index: int = Field(ge=0)
    seed: int
    covered: bool
    best_fitness: int
    best_epochs: Optional[int] = None
    wall_time_seconds: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _check_outcome(self) -> "RunRecord":
        if self.covered and self.best_epochs != self.best_fitness:
            raise ValueError(
                f"covered run must carry best_epochs equal to best_fitness {self.best_fitness}, got {self.best_epochs}"
            )
        if not self.covered and self.best_epochs is not None:
            raise ValueError(f"uncovered run carries best_epochs {self.best_epochs}")
        return self

    @property
    def config_key(self) -> tuple:
        return (self.map_id, self.uavs, self.population_size, self.generations)


# Solve result document

class SolveDocument(BaseModel):
    """Everything `solve` knows about one GA run, enough to render and replay it"""
    format: str = SOLVE_FORMAT
    map_id: str
    map_text: str
    uavs: int
    config: GaConfig
    covered: bool
    fitness: int
    epochs_used: int
    unvisited: int
    lower_bound: int
    max_epochs: int
    generations_executed: int
    fitness_history: List[int]
    # paths[u] is a list of [row, col] cells, index 0 = start
    paths: List[List[List[int]]]
    movement_maps: List[List[str]]
    genotype: List[float]
