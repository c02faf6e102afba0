"""Pipeline stages and their on-disk artifacts.

Each stage reads the artifacts of earlier stages from the output directory
and writes its own, so a run can be resumed stage by stage:

    estimate  -> dirtmap.json   (+ dirtmap.pgm/.txt, timemap.txt renders)
    partition -> partition.json (+ partition.txt render)
    plan      -> routes.json    (+ routes.txt render)
    simulate  -> report.json
    compare   -> comparison.json

Artifacts carry no timestamps and are written with a stable key order, so
identical inputs produce byte-identical files. A failing stage writes
error.json (stage, error type, message) and leaves earlier artifacts alone.
"""

from __future__ import annotations

import json
from pathlib import Path

from .config import RunConfig
from .errors import ArtifactError, MultisweepError, StageError
from .grid import DirtMap, GridMap, build_dirt_map, load_grid, load_pass_log
from .partition import Partition, Region, partition
from .render import render_dirt_map, render_partition_routes, render_time_map
from .routes import Route, annotate_route, plan_route
from .sim import (
    ComparisonReport,
    RobotStats,
    SimReport,
    compare,
    sample_dirt_field,
    simulate_baseline,
    simulate_team,
)


def _write(path: Path, text: str):
    path.write_text(text)


def _write_json(path: Path, obj):
    _write(path, json.dumps(obj, indent=2) + "\n")


def _read_json(path: Path):
    if not path.exists():
        raise ArtifactError(f"{path.name} not found in {path.parent}; run the earlier stages first")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ArtifactError(f"{path.name}: {e}") from None


# -- serialization ---------------------------------------------------------


def dirtmap_to_json(dm: DirtMap) -> dict:
    return {
        "grid": {
            "width": dm.grid.width,
            "height": dm.grid.height,
            "rows": list(dm.grid.cells),
            "cell_size": dm.grid.cell_size,
        },
        "horizon": list(dm.horizon),
        "lambda_total": dm.lambda_total,
        "rates": [[x, y, dm.rates[(x, y)]] for (x, y) in sorted(dm.rates, key=lambda c: (c[1], c[0]))],
        "insufficient": sorted([list(c) for c in dm.insufficient]),
    }


def dirtmap_from_json(doc: dict) -> DirtMap:
    g = doc["grid"]
    grid = GridMap(g["width"], g["height"], tuple(g["rows"]), g["cell_size"])
    rates = {(x, y): lam for x, y, lam in doc["rates"]}
    return DirtMap(
        grid,
        tuple(doc["horizon"]),
        rates,
        doc["lambda_total"],
        frozenset((x, y) for x, y in doc["insufficient"]),
    )


def partition_to_json(part: Partition) -> dict:
    return {
        "lambda_s": part.lambda_s,
        "lambda_total": part.lambda_total,
        "regions": [
            {
                "id": reg.id,
                "flag": reg.flag,
                "lambda_actual": reg.lambda_actual,
                "cells": [list(c) for c in reg.cells],
            }
            for reg in part.regions
        ],
    }


def partition_from_json(doc: dict) -> Partition:
    regions = tuple(
        Region(
            r["id"],
            tuple((x, y) for x, y in r["cells"]),
            r["lambda_actual"],
            r["flag"],
        )
        for r in doc["regions"]
    )
    return Partition(regions, doc["lambda_s"], doc["lambda_total"])


def route_to_json(rt: Route) -> dict:
    return {
        "region_id": rt.region_id,
        "start": list(rt.start),
        "visits": [{"x": c[0], "y": c[1], "dwell_s": d} for c, d in rt.visits],
        "travel_distance": rt.travel_distance,
        "branch_overflow": rt.branch_overflow,
    }


def route_from_json(doc: dict) -> Route:
    return Route(
        doc["region_id"],
        tuple(((v["x"], v["y"]), v["dwell_s"]) for v in doc["visits"]),
        doc["travel_distance"],
        doc.get("branch_overflow", False),
    )


def report_to_json(rep: SimReport) -> dict:
    return {
        "makespan": rep.makespan,
        "per_robot": [
            {"travel_s": s.travel_s, "clean_s": s.clean_s, "battery_pct": s.battery_pct}
            for s in rep.per_robot
        ],
        "total_battery_pct": rep.total_battery_pct,
        "residual_dirt": rep.residual_dirt,
        "cells_visited": rep.cells_visited,
    }


def report_from_json(doc: dict) -> SimReport:
    return SimReport(
        doc["makespan"],
        tuple(RobotStats(s["travel_s"], s["clean_s"], s["battery_pct"]) for s in doc["per_robot"]),
        doc["total_battery_pct"],
        doc["residual_dirt"],
        doc["cells_visited"],
    )


def comparison_to_json(comp: ComparisonReport) -> dict:
    return {
        "makespan_ratio": comp.makespan_ratio,
        "battery_ratio": comp.battery_ratio,
        "residual_diff": comp.residual_diff,
        "paper_consistent": comp.paper_consistent,
    }


# -- stages ----------------------------------------------------------------


def stage_estimate(cfg: RunConfig) -> DirtMap:
    try:
        map_text = Path(cfg.map_path).read_text()
    except OSError as e:
        raise ArtifactError(f"cannot read map_path {cfg.map_path}: {e}") from None
    try:
        log_text = Path(cfg.log_path).read_text()
    except OSError as e:
        raise ArtifactError(f"cannot read log_path {cfg.log_path}: {e}") from None
    grid = load_grid(map_text)
    histories = load_pass_log(log_text, epoch=cfg.epoch)
    dm = build_dirt_map(grid, histories, *cfg.horizon)
    out = Path(cfg.output_dir)
    _write_json(out / "dirtmap.json", dirtmap_to_json(dm))
    if "dirtmap" in cfg.render:
        pgm, art = render_dirt_map(dm, fixed_scale=cfg.fixed_scale)
        _write(out / "dirtmap.pgm", pgm)
        _write(out / "dirtmap.txt", art)
    if "timemap" in cfg.render:
        _write(out / "timemap.txt", render_time_map(dm))
    return dm


def stage_partition(cfg: RunConfig) -> Partition:
    out = Path(cfg.output_dir)
    dm = dirtmap_from_json(_read_json(out / "dirtmap.json"))
    part = partition(dm, cfg.robots, max_expansions=cfg.max_expansions)
    _write_json(out / "partition.json", partition_to_json(part))
    if "partition" in cfg.render:
        _write(out / "partition.txt", render_partition_routes(part, None, dm.grid))
    return part


def stage_plan(cfg: RunConfig) -> list[Route]:
    out = Path(cfg.output_dir)
    dm = dirtmap_from_json(_read_json(out / "dirtmap.json"))
    part = partition_from_json(_read_json(out / "partition.json"))
    routes = []
    for reg in part.regions:
        rt = plan_route(reg.cells, branch_cap=cfg.branch_cap)
        routes.append(annotate_route(rt, dm, region_id=reg.id))
    _write_json(out / "routes.json", {"routes": [route_to_json(rt) for rt in routes]})
    if "routes" in cfg.render:
        _write(out / "routes.txt", render_partition_routes(part, routes, dm.grid))
    return routes


def stage_simulate(cfg: RunConfig) -> tuple[SimReport, SimReport]:
    out = Path(cfg.output_dir)
    dm = dirtmap_from_json(_read_json(out / "dirtmap.json"))
    routes = [route_from_json(d) for d in _read_json(out / "routes.json")["routes"]]
    field = sample_dirt_field(dm, cfg.sim.rng_seed)
    team = simulate_team(routes, field, cfg.sim)
    baseline = simulate_baseline(dm.grid, dm, field, cfg.sim)
    _write_json(out / "report.json", {"team": report_to_json(team), "baseline": report_to_json(baseline)})
    return team, baseline


def stage_compare(cfg: RunConfig) -> ComparisonReport:
    out = Path(cfg.output_dir)
    doc = _read_json(out / "report.json")
    comp = compare(report_from_json(doc["team"]), report_from_json(doc["baseline"]))
    _write_json(out / "comparison.json", comparison_to_json(comp))
    return comp


STAGES = (
    ("estimate", stage_estimate),
    ("partition", stage_partition),
    ("plan", stage_plan),
    ("simulate", stage_simulate),
    ("compare", stage_compare),
)

_STAGE_BY_NAME = dict(STAGES)


def run_stage(cfg: RunConfig, name: str):
    """Run a single stage; on failure write error.json and raise StageError."""
    fn = _STAGE_BY_NAME[name]
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        return fn(cfg)
    except (MultisweepError, OSError) as e:
        try:
            _write_json(out / "error.json", {"stage": name, "error": type(e).__name__, "message": str(e)})
        except OSError:
            pass
        raise StageError(name, e) from e


def run_pipeline(cfg: RunConfig):
    """Run every stage in order; returns the final ComparisonReport."""
    result = None
    for name, _ in STAGES:
        result = run_stage(cfg, name)
    return result
