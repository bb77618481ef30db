"""
🗺️ Static path diagrams and solve result documents

One diagram per UAV: obstacles filled, a direction glyph on every cell the
UAV departed from, the start marked in parentheses and the final cell as 'o'.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from models.schemas import GaConfig, SolveDocument
from planner.codec import ASCII_GLYPHS, GLYPHS, build_movement_maps, movement_map_rows
from planner.errors import CoverageError, ResultFormatError
from planner.evolve import GaRunResult
from planner.gridmap import DIRECTIONS, Coord, GridMap, parse_map, serialize_map, theoretical_min_epochs
from planner.sim import SimResult, evaluate, trajectory_violations
from utils.logger import get_logger

logger = get_logger("render")

CELL_PX = 40
UAV_COLOURS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd")


# Result documents

def make_solve_document(grid: GridMap, n: int, config: GaConfig, result: GaRunResult) -> SolveDocument:
    sim = result.best_sim
    return SolveDocument(
        map_id=grid.id,
        map_text=serialize_map(grid),
        uavs=n,
        config=config,
        covered=sim.covered,
        fitness=sim.fitness,
        epochs_used=sim.epochs_used,
        unvisited=sim.unvisited,
        lower_bound=theoretical_min_epochs(grid, n),
        max_epochs=sim.max_epochs,
        generations_executed=result.generations_executed,
        fitness_history=result.fitness_history,
        paths=[[[cell.row, cell.col] for cell in path] for path in sim.paths],
        movement_maps=[movement_map_rows(mm, grid) for mm in build_movement_maps(result.best_genotype, grid, n)],
        genotype=[float(g) for g in result.best_genotype],
    )


def write_solve_document(document: SolveDocument, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")


def read_solve_document(path: str | Path) -> SolveDocument:
    path = Path(path)
    try:
        document = SolveDocument.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ResultFormatError(f"cannot read result file {path}: {e}") from e
    except ValidationError as e:
        raise ResultFormatError(f"{path} is not a solve result: {e.errors()[0]['msg']}") from e
    if not document.paths or any(not path_cells for path_cells in document.paths):
        raise ResultFormatError(f"{path} carries no paths to render")
    return document


def document_grid(document: SolveDocument) -> GridMap:
    return parse_map(document.map_text, map_id=document.map_id)


def document_sim(document: SolveDocument) -> SimResult:
    return SimResult(
        fitness=document.fitness,
        covered=document.covered,
        epochs_used=document.epochs_used,
        unvisited=document.unvisited,
        max_epochs=document.max_epochs,
        paths=tuple(tuple(Coord(r, c) for r, c in path) for path in document.paths),
    )


def verify_document(document: SolveDocument) -> list[str]:
    """Replay the stored paths, then re-evaluate the stored genotype and compare."""
    grid = document_grid(document)
    stored = document_sim(document)
    problems = trajectory_violations(stored, grid)
    try:
        replay = evaluate(document.genotype, grid, document.uavs)
    except CoverageError as e:
        return problems + [f"genotype does not evaluate: {e}"]
    if replay.fitness != stored.fitness or replay.paths != stored.paths:
        problems.append(f"genotype replays to fitness {replay.fitness}, document says {stored.fitness}")
    return problems


# ASCII

def ascii_diagram(grid: GridMap, path: Sequence[Coord], ascii_only: bool = False) -> list[str]:
    glyphs = ASCII_GLYPHS if ascii_only else GLYPHS
    departed = {
        src: direction
        for src, dst in zip(path, path[1:])
        for direction in DIRECTIONS
        if src != dst and src.step(direction) == dst
    }

    start, end = path[0], path[-1]
    lines = []
    for r in range(grid.rows):
        cells = []
        for c in range(grid.cols):
            cell = Coord(r, c)
            if grid.obstacles[r][c]:
                cells.append(" # ")
            elif cell == start:
                cells.append(f"({glyphs[departed[cell]] if cell in departed else 'o'})")
            elif cell in departed:
                cells.append(f" {glyphs[departed[cell]]} ")
            elif cell == end:
                cells.append(" o ")
            else:
                cells.append(" . ")
        lines.append("".join(cells).rstrip())
    return lines


def ascii_diagrams(grid: GridMap, paths: Sequence[Sequence[Coord]], ascii_only: bool = False) -> list[str]:
    blocks = []
    for u, path in enumerate(paths):
        moves = sum(1 for a, b in zip(path, path[1:]) if a != b)
        header = f"UAV {u + 1}: start {path[0]}, {moves} moves, {len(set(path))} cells"
        blocks.append("\n".join([header] + ascii_diagram(grid, path, ascii_only)))
    return blocks


# SVG

def svg_diagram(grid: GridMap, path: Sequence[Coord], uav: int) -> ET.Element:
    width, height = grid.cols * CELL_PX, grid.rows * CELL_PX
    colour = UAV_COLOURS[uav % len(UAV_COLOURS)]
    visited = set(path)

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=f"{width}px",
        height=f"{height}px",
        viewBox=f"0 0 {width} {height}",
    )
    cells = ET.SubElement(svg, "g", stroke="#888888")
    for r in range(grid.rows):
        for c in range(grid.cols):
            if grid.obstacles[r][c]:
                fill = "#333333"
            elif Coord(r, c) in visited:
                fill = "#f3f3f3"
            else:
                fill = "#ffffff"
            ET.SubElement(
                cells, "rect",
                x=str(c * CELL_PX), y=str(r * CELL_PX),
                width=str(CELL_PX), height=str(CELL_PX), fill=fill,
            )

    def centre(cell: Coord) -> tuple[int, int]:
        return cell.col * CELL_PX + CELL_PX // 2, cell.row * CELL_PX + CELL_PX // 2

    points = []
    for cell in path:
        if not points or points[-1] != centre(cell):
            points.append(centre(cell))
    if len(points) > 1:
        ET.SubElement(
            svg, "polyline",
            points=" ".join(f"{x},{y}" for x, y in points),
            fill="none", stroke=colour,
            **{"stroke-width": "4", "stroke-linejoin": "round"},
        )
    sx, sy = centre(path[0])
    ET.SubElement(svg, "circle", cx=str(sx), cy=str(sy), r=str(CELL_PX // 4), fill=colour)
    ex, ey = centre(path[-1])
    ET.SubElement(
        svg, "rect",
        x=str(ex - CELL_PX // 6), y=str(ey - CELL_PX // 6),
        width=str(CELL_PX // 3), height=str(CELL_PX // 3),
        fill="none", stroke=colour, **{"stroke-width": "3"},
    )
    return svg


def svg_documents(grid: GridMap, paths: Sequence[Sequence[Coord]]) -> list[str]:
    return [ET.tostring(svg_diagram(grid, path, u), encoding="unicode") for u, path in enumerate(paths)]


def write_svgs(grid: GridMap, paths: Sequence[Sequence[Coord]], out_dir: str | Path, stem: str) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for u, text in enumerate(svg_documents(grid, paths)):
        target = out_dir / f"{stem}_uav{u + 1}.svg"
        target.write_text(text + "\n", encoding="utf-8")
        written.append(target)
    logger.info(f"Wrote {len(written)} SVG diagrams to {out_dir}")
    return written


def document_summary(document: SolveDocument) -> str:
    if document.covered:
        return f"covered in {document.epochs_used} epochs (bound {document.lower_bound})"
    return (
        f"not covered: fitness {document.fitness} = max epochs {document.max_epochs} "
        f"+ {document.unvisited} unvisited cells"
    )
