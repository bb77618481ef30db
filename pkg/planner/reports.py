"""
📊 Aggregations over run records

Every aggregation is a pure function of the record set (order-insensitive)
returning a pandas DataFrame with full-precision numbers. Display strings
(half-up rounding, "—" for empty cells) are produced separately so CSV and
JSON output keep the raw values.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Optional

import pandas as pd
from rich.table import Table

from models.schemas import RunRecord
from planner.errors import ConfigError, RecordsFormatError

MISSING = "—"

RECORD_COLUMNS = [
    "map_id", "uavs", "population_size", "generations", "run_index",
    "seed", "covered", "best_fitness", "best_epochs", "wall_time_seconds",
]

# Published reference values keyed by (map_id, uavs)

REFERENCE_MAX_SUCCESS = {
    ("map1", 1): 78, ("map1", 2): 100, ("map1", 3): 100, ("map1", 4): 100,
    ("map2", 1): 0, ("map2", 2): 100, ("map2", 3): 100, ("map2", 4): 100,
    ("map3", 1): 0, ("map3", 2): 100, ("map3", 3): 100, ("map3", 4): 100,
    ("map4", 1): 0, ("map4", 2): 100, ("map4", 3): 100, ("map4", 4): 100,
    ("map5", 1): 0, ("map5", 2): 0, ("map5", 3): 30, ("map5", 4): 100,
    ("map6", 1): 0, ("map6", 2): 0, ("map6", 3): 0, ("map6", 4): 100,
}

# (mean epochs, population, generations); None where nothing covered
REFERENCE_BEST_CONFIG = {
    ("map1", 1): (48.0, 1000, 100), ("map1", 2): (24.0, 4000, 300),
    ("map1", 3): (16.32, 4000, 500), ("map1", 4): (12.04, 4000, 500),
    ("map2", 1): None, ("map2", 2): (13.88, 5000, 200),
    ("map2", 3): (9.0, 2000, 100), ("map2", 4): (7.0, 1000, 100),
    ("map3", 1): None, ("map3", 2): (13.0, 2000, 100),
    ("map3", 3): (9.0, 1000, 100), ("map3", 4): (6.0, 1000, 100),
    ("map4", 1): None, ("map4", 2): (23.0, 5000, 500),
    ("map4", 3): (16.04, 3000, 400), ("map4", 4): (11.0, 2000, 400),
    ("map5", 1): None, ("map5", 2): None,
    ("map5", 3): (25.0, 1000, 100), ("map5", 4): (16.1, 4000, 400),
    ("map6", 1): None, ("map6", 2): None, ("map6", 3): None,
    ("map6", 4): (21.49, 1000, 500),
}

REFERENCE_MIN_EPOCHS = {
    ("map1", 1): 48, ("map1", 2): 24, ("map1", 3): 16, ("map1", 4): 12,
    ("map2", 1): 43, ("map2", 2): 13, ("map2", 3): 9, ("map2", 4): 7,
    ("map3", 1): 58, ("map3", 2): 13, ("map3", 3): 9, ("map3", 4): 6,
    ("map4", 1): 79, ("map4", 2): 23, ("map4", 3): 15, ("map4", 4): 11,
    ("map5", 1): 109, ("map5", 2): 51, ("map5", 3): 23, ("map5", 4): 15,
    ("map6", 1): 128, ("map6", 2): 64, ("map6", 3): 41, ("map6", 4): 15,
}

# (min seconds, max seconds) on the reference hardware
REFERENCE_TIMES = {
    ("map1", 1): (17.2, 625.08), ("map1", 2): (15.88, 511.14),
    ("map1", 3): (11.52, 644.99), ("map1", 4): (10.40, 626.93),
    ("map2", 1): (12.87, 497.48), ("map2", 2): (12.46, 377.44),
    ("map2", 3): (12.36, 583.84), ("map2", 4): (10.57, 659.91),
    ("map3", 1): (16.59, 619.09), ("map3", 2): (15.25, 617.79),
    ("map3", 3): (15.18, 653.08), ("map3", 4): (10.33, 644.55),
    ("map4", 1): (18.01, 687.44), ("map4", 2): (15.11, 679.44),
    ("map4", 3): (14.87, 651.99), ("map4", 4): (12.98, 639.54),
    ("map5", 1): (19.13, 395.45), ("map5", 2): (18.25, 362.15),
    ("map5", 3): (14.92, 403.84), ("map5", 4): (11.79, 659.91),
    ("map6", 1): (11.52, 528.21), ("map6", 2): (10.41, 532.15),
    ("map6", 3): (10.11, 555.12), ("map6", 4): (10.05, 659.97),
}

# Reinforcement-learning baseline, (mean, sd) epochs
RL_REFERENCE = {
    ("map1", 1): (17297.80, 2186.93), ("map1", 2): (9117.80, 7924.43),
    ("map1", 3): (6032.80, 5877.52), ("map1", 4): (6713.20, 6773.66),
    ("map2", 1): (15086.00, 3910.30), ("map2", 2): (1265.00, 891.23),
    ("map2", 3): (571.40, 374.07), ("map2", 4): (265.60, 137.48),
    ("map3", 1): (22562.60, 3366.92), ("map3", 2): (2619.20, 1780.14),
    ("map3", 3): (5172.80, 8840.37), ("map3", 4): (5128.00, 7363.21),
    ("map4", 1): (16022.80, 1452.18), ("map4", 2): (13107.80, 6544.31),
    ("map4", 3): (8800.00, 7003.98), ("map4", 4): (4188.80, 2619.40),
    ("map5", 1): (13657.80, 1813.33), ("map5", 2): (13030.60, 1048.04),
    ("map5", 3): (10396.00, 2789.60), ("map5", 4): (10035.80, 4118.25),
    ("map6", 1): (10764.40, 907.76), ("map6", 2): (9130.00, 1379.18),
    ("map6", 3): (7759.60, 1946.93), ("map6", 4): (9392.40, 2002.47),
}

# GA column published next to the RL baseline; its epoch metric is not the fitness used here
PUBLISHED_GA_COMPARISON = {
    ("map1", 1): (124.60, 2.42), ("map1", 2): (72.94, 2.15),
    ("map1", 3): (54.94, 2.12), ("map1", 4): (45.78, 2.18),
    ("map2", 1): (46.88, 1.38), ("map2", 2): (23.88, 1.02),
    ("map2", 3): (16.00, 0.76), ("map2", 4): (13.14, 0.86),
    ("map3", 1): (67.18, 0.98), ("map3", 2): (38.76, 1.19),
    ("map3", 3): (28.96, 1.43), ("map3", 4): (25.00, 1.28),
    ("map4", 1): (97.90, 2.43), ("map4", 2): (56.96, 2.03),
    ("map4", 3): (42.62, 2.07), ("map4", 4): (36.10, 1.56),
    ("map5", 1): (134.58, 1.82), ("map5", 2): (81.36, 2.18),
    ("map5", 3): (63.04, 2.16), ("map5", 4): (54.66, 1.97),
    ("map6", 1): (161.68, 2.08), ("map6", 2): (98.94, 1.98),
    ("map6", 3): (77.46, 2.32), ("map6", 4): (67.76, 2.06),
}

COMPARISON_FOOTNOTE = (
    "RL values are epochs-to-coverage during training of the learned policy; "
    "ours are epochs of the best movement maps found per run. The two metrics "
    "are not directly comparable."
)


def half_up(value: float, digits: int = 0) -> float:
    scale = 10 ** digits
    return math.floor(value * scale + 0.5) / scale


def _short(value: float) -> str:
    """Two decimals, trailing zeros trimmed down to one: 48.0, 16.32, 13.9"""
    text = f"{half_up(value, 2):.2f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def records_frame(records: Iterable[RunRecord]) -> pd.DataFrame:
    rows = [record.model_dump() for record in records]
    if not rows:
        raise RecordsFormatError("no run records to aggregate")
    df = pd.DataFrame(rows, columns=RECORD_COLUMNS)
    df["covered"] = df["covered"].astype(bool)
    df["best_epochs"] = pd.to_numeric(df["best_epochs"])
    return df


def _sorted(frame: pd.DataFrame) -> pd.DataFrame:
    keys = [c for c in ("map_id", "uavs", "population_size", "generations") if c in frame.columns]
    return frame.sort_values(keys, kind="stable").reset_index(drop=True)


def _per_configuration(df: pd.DataFrame) -> pd.DataFrame:
    return df[["map_id", "uavs"]].drop_duplicates()


def aggregate_success(records: Iterable[RunRecord]) -> pd.DataFrame:
    """Percent of covered runs per (map, uavs, population, generations)."""
    df = records_frame(records)
    table = (
        df.groupby(["map_id", "uavs", "population_size", "generations"])["covered"]
        .agg(runs="size", covered="sum")
        .reset_index()
    )
    table["covered"] = table["covered"].astype(int)
    table["percent"] = 100.0 * table["covered"] / table["runs"]
    return _sorted(table)


def aggregate_max_success(records: Iterable[RunRecord]) -> pd.DataFrame:
    success = aggregate_success(records)
    table = success.groupby(["map_id", "uavs"])["percent"].max().reset_index()
    return _sorted(table)


def aggregate_best_config(records: Iterable[RunRecord]) -> pd.DataFrame:
    """
    Per (map, uavs): the GA config with the lowest mean epochs over covered
    runs; ties go to the smaller population, then fewer generations.
    Configurations that never covered keep NaN/None values.
    """
    df = records_frame(records)
    covered = df[df["covered"]]
    means = (
        covered.groupby(["map_id", "uavs", "population_size", "generations"])["best_epochs"]
        .mean()
        .reset_index(name="mean_epochs")
        .sort_values(["map_id", "uavs", "mean_epochs", "population_size", "generations"], kind="stable")
        .groupby(["map_id", "uavs"])
        .head(1)
    )
    table = _per_configuration(df).merge(means, on=["map_id", "uavs"], how="left")
    table["population_size"] = table["population_size"].astype("Int64")
    table["generations"] = table["generations"].astype("Int64")
    return _sorted(table)


def aggregate_min_epochs(records: Iterable[RunRecord]) -> pd.DataFrame:
    df = records_frame(records)
    minima = (
        df[df["covered"]].groupby(["map_id", "uavs"])["best_epochs"].min().reset_index(name="min_epochs")
    )
    table = _per_configuration(df).merge(minima, on=["map_id", "uavs"], how="left")
    table["min_epochs"] = table["min_epochs"].astype("Int64")
    return _sorted(table)


def aggregate_times(records: Iterable[RunRecord]) -> pd.DataFrame:
    df = records_frame(records)
    ranges = (
        df[df["covered"]]
        .groupby(["map_id", "uavs"])["wall_time_seconds"]
        .agg(min_seconds="min", max_seconds="max")
        .reset_index()
    )
    table = _per_configuration(df).merge(ranges, on=["map_id", "uavs"], how="left")
    return _sorted(table)


def comparison_report(records: Iterable[RunRecord]) -> pd.DataFrame:
    """Our mean ± sd epochs over covered runs next to the RL baseline constants."""
    df = records_frame(records)
    stats = (
        df[df["covered"]]
        .groupby(["map_id", "uavs"])["best_epochs"]
        .agg(covered_runs="size", mean_epochs="mean", sd_epochs=lambda s: s.std(ddof=0))
        .reset_index()
    )
    table = _per_configuration(df).merge(stats, on=["map_id", "uavs"], how="left")
    table["covered_runs"] = table["covered_runs"].fillna(0).astype(int)
    keys = list(zip(table["map_id"], table["uavs"]))
    table["rl_mean"] = [RL_REFERENCE.get(k, (math.nan, math.nan))[0] for k in keys]
    table["rl_sd"] = [RL_REFERENCE.get(k, (math.nan, math.nan))[1] for k in keys]
    return _sorted(table)


# Display

def _present(value) -> bool:
    return value is not None and not pd.isna(value)


def _reference_text(table_id: str, key: tuple[str, int]) -> str:
    if table_id == "max-success":
        value = REFERENCE_MAX_SUCCESS.get(key)
        return f"{value}%" if value is not None else MISSING
    if table_id == "best-config":
        value = REFERENCE_BEST_CONFIG.get(key)
        return f"{_short(value[0])} / {value[1]} / {value[2]}" if value else MISSING
    if table_id == "min-epochs":
        value = REFERENCE_MIN_EPOCHS.get(key)
        return str(value) if value is not None else MISSING
    if table_id == "times":
        value = REFERENCE_TIMES.get(key)
        return f"{value[0]:.2f} / {value[1]:.2f}" if value else MISSING
    if table_id == "comparison":
        value = PUBLISHED_GA_COMPARISON.get(key)
        return f"{value[0]:.2f} ± {value[1]:.2f}" if value else MISSING
    return MISSING


def display_rows(table_id: str, frame: pd.DataFrame, reference: bool = False) -> tuple[list[str], list[list[str]]]:
    """Header and string cells for aligned text output."""
    if table_id == "success":
        header = ["Map", "UAVs", "Population", "Generations", "Runs", "Covered", "Success"]
        rows = [
            [r.map_id, str(r.uavs), str(r.population_size), str(r.generations),
             str(r.runs), str(r.covered), f"{half_up(r.percent):.0f}%"]
            for r in frame.itertuples()
        ]
        return header, rows

    if table_id == "max-success":
        header = ["Map", "UAVs", "Max success"]
        rows = [[r.map_id, str(r.uavs), f"{half_up(r.percent):.0f}%"] for r in frame.itertuples()]
    elif table_id == "best-config":
        header = ["Map", "UAVs", "Mean epochs / pop / gens"]
        rows = [
            [r.map_id, str(r.uavs),
             f"{_short(r.mean_epochs)} / {r.population_size} / {r.generations}" if _present(r.mean_epochs) else MISSING]
            for r in frame.itertuples()
        ]
    elif table_id == "min-epochs":
        header = ["Map", "UAVs", "Min epochs"]
        rows = [
            [r.map_id, str(r.uavs), str(int(r.min_epochs)) if _present(r.min_epochs) else MISSING]
            for r in frame.itertuples()
        ]
    elif table_id == "times":
        header = ["Map", "UAVs", "Time min / max (s)"]
        rows = [
            [r.map_id, str(r.uavs),
             f"{half_up(r.min_seconds, 2):.2f} / {half_up(r.max_seconds, 2):.2f}" if _present(r.min_seconds) else MISSING]
            for r in frame.itertuples()
        ]
    elif table_id == "comparison":
        header = ["Map", "UAVs", "Covered runs", "GA epochs (mean ± sd)", "RL epochs (mean ± sd)"]
        rows = [
            [r.map_id, str(r.uavs), str(r.covered_runs),
             f"{half_up(r.mean_epochs, 2):.2f} ± {half_up(r.sd_epochs, 2):.2f}" if _present(r.mean_epochs) else MISSING,
             f"{r.rl_mean:.2f} ± {r.rl_sd:.2f}" if _present(r.rl_mean) else MISSING]
            for r in frame.itertuples()
        ]
    else:
        raise ConfigError(f"unknown table '{table_id}'")

    if reference:
        header.append("Published GA column" if table_id == "comparison" else "Published")
        for row, r in zip(rows, frame.itertuples()):
            row.append(_reference_text(table_id, (r.map_id, int(r.uavs))))
    return header, rows


TITLES = {
    "success": "Covered runs per GA configuration",
    "max-success": "Maximum success per map and UAV count",
    "best-config": "Best GA configuration per map and UAV count",
    "min-epochs": "Minimum epochs over covered runs",
    "times": "Training time range over covered runs",
    "comparison": "Comparison with the RL baseline",
}

AGGREGATIONS: dict[str, Callable[[Iterable[RunRecord]], pd.DataFrame]] = {
    "success": aggregate_success,
    "max-success": aggregate_max_success,
    "best-config": aggregate_best_config,
    "min-epochs": aggregate_min_epochs,
    "times": aggregate_times,
    "comparison": comparison_report,
}


def build_report(table_id: str, records: list[RunRecord]) -> pd.DataFrame:
    if table_id not in AGGREGATIONS:
        raise ConfigError(f"unknown table '{table_id}'")
    return AGGREGATIONS[table_id](records)


def rich_table(table_id: str, frame: pd.DataFrame, reference: bool = False) -> Table:
    header, rows = display_rows(table_id, frame, reference)
    caption: Optional[str] = COMPARISON_FOOTNOTE if table_id == "comparison" else None
    table = Table(title=TITLES[table_id], caption=caption, show_header=True, header_style="bold magenta")
    for i, name in enumerate(header):
        table.add_column(name, style="cyan" if i < 2 else "green", justify="left" if i == 0 else "right")
    for row in rows:
        table.add_row(*row)
    return table


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False)


def to_json(frame: pd.DataFrame) -> str:
    return frame.to_json(orient="records", indent=2)
