#!/usr/bin/env python3
"""
🛩️ UAV Coverage Planner - Grid Search Progress Display
Rich progress bar and summary for long experiment grids, drawn on stderr
"""

from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
from typing import Optional

from rich.console import Console
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)
from rich.table import Table

from models.schemas import RunRecord

from .logger import get_logger

logger = get_logger('run_progress')


@dataclass
class GridStats:
    """Counters for one grid-search session"""
    total_runs: int = 0
    skipped_runs: int = 0
    completed_runs: int = 0
    covered_runs: int = 0
    start_time: Optional[datetime] = None

    @property
    def runs_per_second(self) -> float:
        if not self.start_time:
            return 0.0
        elapsed = max((datetime.now() - self.start_time).total_seconds(), 1e-9)
        return self.completed_runs / elapsed


class GridProgressDisplay:
    """
    Progress bar for grid-search runs

    Args:
        console: Rich Console instance (stderr console if None)
        enabled: False turns every call into bookkeeping only
    """

    def __init__(self, console: Optional[Console] = None, enabled: bool = True):
        self.console = console or Console(stderr=True)
        self.enabled = enabled
        self.stats = GridStats()
        self.progress: Optional[Progress] = None
        self.task_id: Optional[int] = None

    def _create_progress_bar(self) -> Progress:
        return Progress(
            SpinnerColumn(),
            TextColumn("[bold blue]{task.fields[operation]}", justify="left"),
            BarColumn(bar_width=40),
            TaskProgressColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            TimeRemainingColumn(),
            console=self.console,
            transient=True,
        )

    @contextmanager
    def session(self, operation: str = "Grid search"):
        logger.info(f"Starting grid session: {operation}")
        self.stats = GridStats(start_time=datetime.now())
        if not self.enabled:
            try:
                yield self
            finally:
                logger.info(f"Completed grid session: {operation}")
            return

        self.progress = self._create_progress_bar()
        self.task_id = self.progress.add_task(description=operation, total=None, operation=operation)
        try:
            with self.progress:
                yield self
        finally:
            self.progress = None
            logger.info(f"Completed grid session: {operation}")
            self._print_final_summary()

    def set_plan(self, total_runs: int, skipped_runs: int):
        """harness.run_grid on_plan callback"""
        self.stats.total_runs = total_runs
        self.stats.skipped_runs = skipped_runs
        if self.progress and self.task_id is not None:
            self.progress.update(self.task_id, total=total_runs, completed=skipped_runs)

    def record(self, record: RunRecord):
        self.stats.completed_runs += 1
        if record.covered:
            self.stats.covered_runs += 1

        if self.progress and self.task_id is not None:
            self.progress.update(
                self.task_id,
                advance=1,
                operation=f"{record.map_id} n={record.uavs} pop={record.population_size} gens={record.generations}",
            )

    def _print_final_summary(self):
        if not self.stats.start_time:
            return

        elapsed = datetime.now() - self.stats.start_time
        summary = Table(show_header=True, header_style="bold green")
        summary.add_column("📊 Grid Summary", style="cyan")
        summary.add_column("Result", style="white")
        summary.add_row("⏱️ Duration", str(elapsed).split('.')[0])
        summary.add_row("📋 Planned runs", str(self.stats.total_runs))
        summary.add_row("⏭️ Already recorded", str(self.stats.skipped_runs))
        summary.add_row("✅ Executed", str(self.stats.completed_runs))
        summary.add_row("🗺️ Covered", f"[green]{self.stats.covered_runs}[/green]")
        summary.add_row("⚡ Speed", f"{self.stats.runs_per_second:.2f} runs/sec")

        self.console.print(Panel(summary, title="🛩️ Grid Search Complete", style="green", padding=(1, 2)))
