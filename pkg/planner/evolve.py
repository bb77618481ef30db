"""
🧬 Real-coded genetic algorithm over movement-map genotypes

Generational replacement: evaluate everyone, carry the `elitism` best over
unchanged, fill the rest by tournament selection -> crossover (two-point
per movement map by default) -> uniform-reset mutation. A single numpy
Generator seeded from the config drives every random draw, so a run is
reproducible from its seed alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from models.schemas import CrossoverKind, GaConfig
from planner.codec import genotype_length
from planner.errors import GenotypeError
from planner.gridmap import GridMap, start_positions, theoretical_min_epochs
from planner.sim import SimResult, evaluate, population_fitness
from utils.logger import get_logger

logger = get_logger("evolve")

# on_generation(generation, population_best_fitness)
GenerationCallback = Callable[[int, int], None]


@dataclass
class GaRunResult:
    best_genotype: np.ndarray = field(repr=False)
    best_fitness: int
    best_sim: SimResult = field(repr=False)
    generations_executed: int
    # best fitness found so far, one entry per generation
    fitness_history: list[int]
    wall_time: float
    stopped_early: bool = False


def effective_mutation_rate(config: GaConfig, length: int, n: int = 1) -> float:
    """Per-gene rate; the default mutates about 1.25 genes per movement map, at most 2.5 per child."""
    if config.mutation_rate is not None:
        return config.mutation_rate
    return min(1.0, min(1.25 * n, 2.5) / max(1, length))


def init_population(rng: np.random.Generator, grid: GridMap, n: int, population_size: int) -> np.ndarray:
    """population_size x (n * V) genes, uniform in [0, 1)."""
    return rng.random((population_size, genotype_length(grid, n)))


def tournament_select(
    rng: np.random.Generator,
    population: np.ndarray,
    fitnesses: np.ndarray,
    k: int,
) -> int:
    """Lowest fitness among k candidates drawn with replacement; ties go to the lowest index."""
    size = len(fitnesses)
    if size == 0 or len(population) == 0:
        raise GenotypeError("cannot select from an empty population")
    candidates = rng.integers(0, size, size=k)
    return int(min(candidates, key=lambda i: (fitnesses[i], i)))


def two_point_mask(rng: np.random.Generator, length: int, maps: int = 1) -> np.ndarray:
    """
    Swap mask cutting each of `maps` equal blocks at its own two points.

    Cuts are drawn from 0..width, so a block may also swap nothing or all of it.
    """
    if maps < 1 or length % maps:
        raise GenotypeError(f"genotype length {length} does not split into {maps} movement maps")
    width = length // maps
    cuts = np.sort(rng.integers(0, width + 1, size=(maps, 2)), axis=1)
    position = np.arange(width)
    return ((position >= cuts[:, :1]) & (position < cuts[:, 1:])).ravel()


def crossover(
    rng: np.random.Generator,
    a: np.ndarray,
    b: np.ndarray,
    rate: float,
    kind: CrossoverKind = "uniform",
    maps: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """
    With probability `rate` exchange genes between the parents, otherwise copy them.

    uniform: every gene swaps independently with probability 0.5.
    two_point: each of the `maps` movement maps swaps one contiguous run of
    row-major cells, keeping neighbouring directions (and so path fragments)
    together.
    """
    if a.shape != b.shape:
        raise GenotypeError(f"parents differ in length ({a.shape[0]} vs {b.shape[0]})")
    if rng.random() >= rate:
        return a.copy(), b.copy()
    if kind == "uniform":
        swap = rng.random(a.shape[0]) < 0.5
    else:
        swap = two_point_mask(rng, a.shape[0], maps)
    return np.where(swap, b, a), np.where(swap, a, b)


def mutate(rng: np.random.Generator, genotype: np.ndarray, rate: float) -> np.ndarray:
    """Each gene is redrawn uniformly with probability `rate`."""
    mask = rng.random(genotype.shape[0]) < rate
    mutated = genotype.copy()
    mutated[mask] = rng.random(int(mask.sum()))
    return mutated


def run_ga(
    config: GaConfig,
    grid: GridMap,
    n: int,
    on_generation: Optional[GenerationCallback] = None,
) -> GaRunResult:
    start_positions(grid, n)
    started = time.perf_counter()

    rng = np.random.default_rng(config.seed)
    length = genotype_length(grid, n)
    mutation_rate = effective_mutation_rate(config, length, n)
    bound = theoretical_min_epochs(grid, n)
    size = config.population_size

    logger.info(
        f"GA run | map={grid.id} uavs={n} pop={size} gens={config.generations} "
        f"seed={config.seed} L={length} crossover={config.crossover} tournament={config.tournament_size} "
        f"mutation={mutation_rate:.4f}"
    )

    population = init_population(rng, grid, n, size)
    fitness = population_fitness(population, grid, n)

    best_index = int(np.argmin(fitness))
    best_genotype = population[best_index].copy()
    best_fitness = int(fitness[best_index])
    history = [best_fitness]
    generation = 1
    if on_generation:
        on_generation(generation, best_fitness)

    def reached_bound() -> bool:
        return config.early_stop_at_lower_bound and best_fitness <= bound

    while generation < config.generations and not reached_bound():
        order = np.argsort(fitness, kind="stable")
        offspring = np.empty_like(population)
        offspring[:config.elitism] = population[order[:config.elitism]]

        filled = config.elitism
        while filled < size:
            first = tournament_select(rng, population, fitness, config.tournament_size)
            second = tournament_select(rng, population, fitness, config.tournament_size)
            child_a, child_b = crossover(
                rng, population[first], population[second], config.crossover_rate, config.crossover, n
            )
            offspring[filled] = mutate(rng, child_a, mutation_rate)
            filled += 1
            if filled < size:
                offspring[filled] = mutate(rng, child_b, mutation_rate)
                filled += 1

        population = offspring
        fitness = population_fitness(population, grid, n)
        generation += 1

        generation_best = int(np.argmin(fitness))
        if fitness[generation_best] < best_fitness:
            best_fitness = int(fitness[generation_best])
            best_genotype = population[generation_best].copy()
        history.append(best_fitness)

        logger.debug(f"generation {generation}: best={int(fitness[generation_best])} overall={best_fitness}")
        if on_generation:
            on_generation(generation, int(fitness[generation_best]))

    stopped_early = generation < config.generations
    if stopped_early:
        logger.info(f"Early stop at generation {generation}: fitness {best_fitness} meets the lower bound")

    best_sim = evaluate(best_genotype, grid, n)
    wall_time = time.perf_counter() - started
    logger.info(
        f"GA done | map={grid.id} uavs={n} best={best_fitness} covered={best_sim.covered} "
        f"generations={generation} time={wall_time:.2f}s"
    )

    return GaRunResult(
        best_genotype=best_genotype,
        best_fitness=best_fitness,
        best_sim=best_sim,
        generations_executed=generation,
        fitness_history=history,
        wall_time=wall_time,
        stopped_early=stopped_early,
    )
