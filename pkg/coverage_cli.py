#!/usr/bin/env python3
"""
🛩️ UAV Coverage Planner - Command Line Interface
Single GA solves, experiment grid searches, reports, map utilities and path rendering

Exit codes: 0 success, 1 usage or input error, 2 runtime error,
3 the GA ran but did not cover the map (solve only).
"""

import json
import sys
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from config import get_config
from models.schemas import GaConfig
from planner.errors import (
    ConfigError,
    CoverageError,
    GenotypeError,
    InvalidMapError,
    MapFormatError,
    RecordsFormatError,
    ResultFormatError,
)
from planner.evolve import run_ga
from planner.gridmap import (
    BUILTIN_MAP_IDS,
    MAX_UAVS,
    Coord,
    builtin_map,
    load_map,
    read_map_file,
    serialize_map,
    start_positions,
    theoretical_min_epochs,
)
from planner import harness, oracle, render, reports
from utils import LogTimer, get_logger, log_exception, setup_logging
from utils.run_progress import GridProgressDisplay

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_NOT_COVERED = 3

INPUT_ERRORS = (
    MapFormatError,
    InvalidMapError,
    ConfigError,
    RecordsFormatError,
    ResultFormatError,
    GenotypeError,
)

TABLE_IDS = ("success", "max-success", "best-config", "min-epochs", "times", "comparison")

# stdout carries results; everything else goes to stderr
console = Console()
err_console = Console(stderr=True)
logger = get_logger('coverage_cli')


def _echo_config(command: str, settings: dict):
    """Resolved settings of a subcommand, on stderr"""
    err_console.print(
        f"⚙️  {command} {json.dumps(settings, default=str)}",
        style="dim", markup=False, highlight=False,
    )


def _bounds(grid, n: int) -> str:
    try:
        start_positions(grid, n)
    except InvalidMapError:
        return reports.MISSING
    return str(theoretical_min_epochs(grid, n))


@click.group()
@click.option('--debug', is_flag=True, help='Enable debug logging')
@click.option('--env', 'environment', default=None, help='Configuration environment (development/production)')
@click.pass_context
def cli(ctx, debug: bool, environment: Optional[str]):
    """🛩️ UAV Coverage Planner - evolve movement maps for UAV swarms"""

    ctx.ensure_object(dict)
    config = get_config(environment)
    ctx.obj['config'] = config

    setup_logging(log_level='DEBUG' if debug else config.LOG_LEVEL, log_dir=config.LOG_DIR)
    if debug:
        logger.debug("Debug logging enabled")


# solve

@cli.command()
@click.option('--map', '-m', 'map_ref', required=True, help='Built-in map name (map1..map6) or map file path')
@click.option('--uavs', '-n', type=click.IntRange(1, MAX_UAVS), default=1, show_default=True, help='Number of UAVs')
@click.option('--pop', 'population', type=int, default=None, help='Population size')
@click.option('--gens', 'generations', type=int, default=None, help='Number of generations')
@click.option('--seed', type=int, default=None, help='Random seed')
@click.option('--crossover', 'crossover_kind', type=click.Choice(['two_point', 'uniform']), default=None,
              help='Crossover operator (default two_point per movement map)')
@click.option('--crossover-rate', type=float, default=None)
@click.option('--mutation-rate', type=float, default=None, help='Per-gene rate (default min(1.25n, 2.5)/L)')
@click.option('--tournament-size', type=int, default=None)
@click.option('--elitism', type=int, default=None)
@click.option('--no-early-stop', is_flag=True, help='Run every generation even at the lower bound')
@click.option('--out', '-o', type=click.Path(dir_okay=False), default=None, help='Result document path')
@click.pass_context
def solve(ctx, map_ref: str, uavs: int, population: Optional[int], generations: Optional[int],
          seed: Optional[int], crossover_kind: Optional[str], crossover_rate: Optional[float],
          mutation_rate: Optional[float], tournament_size: Optional[int], elitism: Optional[int],
          no_early_stop: bool, out: Optional[str]):
    """🧬 Run the GA once and write a result document"""

    config = ctx.obj['config']
    grid = load_map(map_ref)
    start_positions(grid, uavs)

    settings = {
        'population_size': population if population is not None else config.POPULATION,
        'generations': generations if generations is not None else config.GENERATIONS,
        'seed': seed if seed is not None else config.SEED,
        'early_stop_at_lower_bound': not no_early_stop,
    }
    optional = {
        'crossover': crossover_kind,
        'crossover_rate': crossover_rate,
        'mutation_rate': mutation_rate,
        'tournament_size': tournament_size,
        'elitism': elitism,
    }
    settings.update({k: v for k, v in optional.items() if v is not None})
    try:
        ga_config = GaConfig(**settings)
    except ValidationError as e:
        raise click.UsageError(f"invalid GA settings: {e.errors()[0]['msg']}")

    out_path = Path(out) if out else Path(config.RESULTS_DIR) / f"solve_{grid.id}_{uavs}uav_seed{ga_config.seed}.json"
    _echo_config('solve', {'map': map_ref, 'uavs': uavs, 'out': str(out_path), **ga_config.model_dump()})

    with err_console.status(f"Evolving movement maps for {grid.id} with {uavs} UAV(s)..."):
        with LogTimer(logger, f"solve {grid.id} n={uavs}"):
            result = run_ga(ga_config, grid, uavs)

    document = render.make_solve_document(grid, uavs, ga_config, result)
    render.write_solve_document(document, out_path)

    console.print(render.document_summary(document))
    err_console.print(
        f"[dim]{result.generations_executed} generations in {result.wall_time:.2f}s → {out_path}[/dim]"
    )
    return EXIT_OK if document.covered else EXIT_NOT_COVERED


# grid-search

@cli.command('grid-search')
@click.argument('config_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--out', '-o', type=click.Path(dir_okay=False), default=None, help='Records file (JSON lines)')
@click.option('--workers', '-w', type=click.IntRange(min=1), default=None, help='Worker processes')
@click.option('--no-resume', is_flag=True, help='Refuse to append to an existing records file')
@click.option('--quiet', '-q', is_flag=True, help='No progress bar')
@click.pass_context
def grid_search(ctx, config_path: str, out: Optional[str], workers: Optional[int], no_resume: bool, quiet: bool):
    """🧪 Run an experiment grid and append run records"""

    config = ctx.obj['config']
    grid = harness.load_experiment_grid(config_path)
    records_path = Path(out or config.RECORDS_PATH)
    workers = workers or config.WORKERS

    existing = []
    if records_path.exists() and records_path.stat().st_size > 0:
        if no_resume:
            raise click.UsageError(f"{records_path} already exists (drop --no-resume to continue it)")
        existing = harness.read_records(records_path)

    _echo_config('grid-search', {
        'config': config_path, 'out': str(records_path), 'workers': workers,
        'resume_from': len(existing), **grid.model_dump(),
    })

    progress = GridProgressDisplay(console=err_console, enabled=not quiet)
    with harness.JsonlRecordSink(records_path) as sink, progress.session(f"Grid {Path(config_path).stem}"):
        for record in harness.run_grid(
            grid,
            sink,
            workers=workers,
            base_dir=Path(config_path).parent,
            skip_seeds=harness.recorded_seeds(existing),
            log_level=config.LOG_LEVEL,
            on_plan=progress.set_plan,
        ):
            progress.record(record)

    console.print(
        f"✅ {progress.stats.completed_runs} runs executed, "
        f"{progress.stats.skipped_runs} already recorded → {records_path}"
    )
    return EXIT_OK


# report

@cli.command()
@click.argument('records_path', type=click.Path(dir_okay=False))
@click.option('--table', '-t', 'table_ids', multiple=True, type=click.Choice(TABLE_IDS),
              help='Table to emit (repeatable; default: all)')
@click.option('--format', '-f', 'fmt', type=click.Choice(['text', 'csv', 'json']), default='text', show_default=True)
@click.option('--reference', is_flag=True, help='Show the published values next to ours')
def report(records_path: str, table_ids: tuple, fmt: str, reference: bool):
    """📊 Aggregate run records into tables"""

    tables = list(table_ids) or list(TABLE_IDS)
    _echo_config('report', {'records': records_path, 'tables': tables, 'format': fmt, 'reference': reference})

    records = harness.read_records(records_path)
    if not records:
        raise RecordsFormatError(f"{records_path} contains no run records")

    for table_id in tables:
        frame = reports.build_report(table_id, records)
        if fmt == 'csv':
            if len(tables) > 1:
                click.echo(f"# {table_id}")
            click.echo(reports.to_csv(frame), nl=False)
        elif fmt == 'json':
            click.echo(reports.to_json(frame) if len(tables) == 1 else json.dumps(
                {'table': table_id, 'rows': json.loads(reports.to_json(frame))}, indent=2
            ))
        else:
            console.print(reports.rich_table(table_id, frame, reference))
    return EXIT_OK


# render

@cli.command('render')
@click.argument('result_path', type=click.Path(dir_okay=False))
@click.option('--format', '-f', 'fmt', type=click.Choice(['ascii', 'svg']), default='ascii', show_default=True)
@click.option('--ascii-only', is_flag=True, help='Use ^ v < > instead of arrow glyphs')
@click.option('--out', '-o', type=click.Path(file_okay=False), default=None, help='Directory for SVG files')
def render_cmd(result_path: str, fmt: str, ascii_only: bool, out: Optional[str]):
    """🗺️ Draw one diagram per UAV from a solve result"""

    _echo_config('render', {'result': result_path, 'format': fmt, 'ascii_only': ascii_only, 'out': out})

    document = render.read_solve_document(result_path)
    problems = render.verify_document(document)
    if problems:
        for problem in problems:
            err_console.print(f"❌ {problem}", style="red", markup=False)
        raise ResultFormatError(f"{result_path} does not replay to a valid trajectory")

    grid = render.document_grid(document)
    paths = render.document_sim(document).paths

    if fmt == 'svg':
        if out:
            for path in render.write_svgs(grid, paths, out, Path(result_path).stem):
                console.print(f"🖼️  {path}")
        else:
            for text in render.svg_documents(grid, paths):
                click.echo(text)
        return EXIT_OK

    for block in render.ascii_diagrams(grid, paths, ascii_only=ascii_only):
        click.echo(block)
        click.echo()
    click.echo(render.document_summary(document))
    return EXIT_OK


# maps / validate

@cli.group()
def maps():
    """🗺️ Built-in maps"""


@maps.command('list')
def maps_list():
    """📋 List built-in maps with their lower bounds"""

    _echo_config('maps list', {})
    table = Table(title="Built-in maps", show_header=True, header_style="bold magenta")
    table.add_column("Map", style="cyan")
    table.add_column("Size", style="white")
    table.add_column("Obstacles", justify="right")
    table.add_column("V", justify="right", style="green")
    table.add_column("Bounds (1/2/3/4 UAVs)", style="yellow")

    for name in BUILTIN_MAP_IDS:
        grid = builtin_map(name)
        bounds = "/".join(_bounds(grid, n) for n in range(1, MAX_UAVS + 1))
        table.add_row(name, grid.size_label, str(grid.obstacle_count), str(grid.visitable_count), bounds)
    console.print(table)
    return EXIT_OK


@maps.command('show')
@click.argument('name')
def maps_show(name: str):
    """🔍 Print a built-in map"""

    _echo_config('maps show', {'name': name})
    if name not in BUILTIN_MAP_IDS:
        raise click.UsageError(f"unknown map '{name}' (choose from {', '.join(BUILTIN_MAP_IDS)})")
    click.echo(serialize_map(builtin_map(name)), nl=False)
    return EXIT_OK


@cli.command()
@click.argument('map_path', type=click.Path(exists=True, dir_okay=False))
def validate(map_path: str):
    """✅ Check a map file and print its lower bounds"""

    _echo_config('validate', {'map': map_path})
    grid = read_map_file(Path(map_path))

    console.print(Panel(
        f"[bold green]✅ {grid.id}[/bold green] is a valid map\n\n"
        f"Size: {grid.size_label}\n"
        f"Visitable cells (V): {grid.visitable_count}\n"
        f"Obstacles: {grid.obstacle_count}\n"
        + "\n".join(f"Lower bound, {n} UAV(s): {_bounds(grid, n)}" for n in range(1, MAX_UAVS + 1)),
        style="bright_blue"
    ))
    return EXIT_OK


# oracle (maintainers)

@cli.group(hidden=True)
def oracle_cmd():
    """🔍 Correctness oracles"""


@oracle_cmd.command('hamiltonian')
@click.option('--map', '-m', 'map_ref', required=True)
@click.option('--row', type=int, default=0, show_default=True)
@click.option('--col', type=int, default=0, show_default=True)
@click.option('--max-states', type=click.IntRange(min=1), default=oracle.OracleBudget().max_states, show_default=True)
def oracle_hamiltonian(map_ref: str, row: int, col: int, max_states: int):
    """Single-UAV feasibility from one start cell"""

    _echo_config('oracle hamiltonian', {'map': map_ref, 'row': row, 'col': col, 'max_states': max_states})
    grid = load_map(map_ref)
    found = oracle.hamiltonian_path_exists(grid, Coord(row, col), oracle.OracleBudget(max_states=max_states))
    click.echo(f"hamiltonian path from ({row},{col}): {'yes' if found else 'no'}")
    return EXIT_OK


@oracle_cmd.command('exhaustive')
@click.option('--map', '-m', 'map_ref', required=True)
@click.option('--uavs', '-n', type=click.IntRange(1, MAX_UAVS), default=1, show_default=True)
@click.option('--max-policies', type=click.IntRange(min=1),
              default=oracle.OracleBudget().max_joint_policies, show_default=True)
def oracle_exhaustive(map_ref: str, uavs: int, max_policies: int):
    """Minimum covering fitness over every joint movement map"""

    _echo_config('oracle exhaustive', {'map': map_ref, 'uavs': uavs, 'max_policies': max_policies})
    grid = load_map(map_ref)
    best = oracle.exhaustive_min_epochs(grid, uavs, oracle.OracleBudget(max_joint_policies=max_policies))
    click.echo(f"minimum epochs: {best if best is not None else 'infeasible'}")
    return EXIT_OK


cli.add_command(oracle_cmd, name='oracle')


def main(argv: Optional[list] = None) -> int:
    """Entry point mapping planner errors to exit codes"""
    try:
        rv = cli.main(args=argv, prog_name='uav-coverage', standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        err_console.print("[yellow]Aborted[/yellow]")
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except INPUT_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        err_console.print(f"❌ {e}", style="red", markup=False)
        return EXIT_USAGE
    except CoverageError as e:
        log_exception(logger, e, "command")
        err_console.print(f"❌ {e}", style="red", markup=False)
        return EXIT_RUNTIME
    except Exception as e:
        log_exception(logger, e, "command")
        err_console.print(f"❌ Unexpected error: {e}", style="red", markup=False)
        return EXIT_RUNTIME
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
