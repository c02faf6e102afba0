"""Seeded dirt-field sampling and deterministic execution of cleaning plans.

The only randomness is the Poisson draw in sample_dirt_field; simulation
itself is a pure computation over each robot's timeline. A robot's time is
travel (Manhattan distance between consecutive visits over travel_speed)
plus cleaning dwell; battery is linear in both plus a fixed per-robot
overhead. A visited cell is fully cleaned when its dwell covers the
requirement derived from the estimated dirt level, and proportionally
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DegenerateScenarioError, DomainError
from .grid import Coord, DirtMap, GridMap
from .routes import Route, cell_distance, dwell_time


@dataclass(frozen=True)
class SimParams:
    """Execution model constants; power figures are battery percent per second."""

    travel_speed: float = 1.0
    move_power: float = 0.02
    clean_power: float = 0.05
    overhead_per_robot: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.travel_speed <= 0 or self.move_power <= 0 or self.clean_power <= 0:
            raise DomainError("travel_speed, move_power and clean_power must be positive")
        if self.overhead_per_robot < 0:
            raise DomainError("overhead_per_robot must be nonnegative")


@dataclass(frozen=True)
class DirtField:
    """One sampled realization of a dirt map.

    amounts holds the realized dirt per free cell; required the dwell seconds
    that count as a full clean there (from the estimated dirt level).
    """

    amounts: dict[Coord, float]
    required: dict[Coord, float]
    seed: int


@dataclass(frozen=True)
class RobotStats:
    travel_s: float
    clean_s: float
    battery_pct: float


@dataclass(frozen=True)
class SimReport:
    makespan: float
    per_robot: tuple[RobotStats, ...]
    total_battery_pct: float
    residual_dirt: float
    cells_visited: int


@dataclass(frozen=True)
class ComparisonReport:
    makespan_ratio: float
    battery_ratio: float
    residual_diff: float
    paper_consistent: bool


def sample_dirt_field(dirt_map: DirtMap, seed: int) -> DirtField:
    """Draw an independent Poisson amount per free cell (row-major order, one
    seeded generator), so the same (map, seed) always yields the same field."""
    cells = dirt_map.grid.free_cells()
    lams = np.array([dirt_map.rates[c] for c in cells], dtype=np.float64)
    draws = np.random.default_rng(seed).poisson(lams) if cells else np.zeros(0)
    amounts = {c: float(v) for c, v in zip(cells, draws)}
    required = {c: dwell_time(dirt_map.rates[c]) for c in cells}
    return DirtField(amounts, required, seed)


def _run_robot(visits, params: SimParams) -> RobotStats:
    cells = [c for c, _ in visits]
    travel = sum(cell_distance(a, b) for a, b in zip(cells, cells[1:])) / params.travel_speed
    clean = math.fsum(d for _, d in visits)
    battery = travel * params.move_power + clean * params.clean_power + params.overhead_per_robot
    return RobotStats(travel, clean, battery)


def _clean_cells(visits, field: DirtField, remaining: dict[Coord, float]):
    for cell, dwell in visits:
        req = field.required[cell]
        if dwell >= req:
            remaining[cell] = 0.0
        else:
            remaining[cell] *= 1.0 - dwell / req


def simulate_team(routes, field: DirtField, params: SimParams) -> SimReport:
    """Execute per-region routes in parallel; makespan is the slowest robot."""
    seen: set[Coord] = set()
    for rt in routes:
        for c, _ in rt.visits:
            if c in seen:
                raise ConsistencyError(f"cell {c} visited by more than one route")
            if c not in field.amounts:
                raise ConsistencyError(f"cell {c} not in the dirt field")
            seen.add(c)
    remaining = dict(field.amounts)
    stats = []
    for rt in routes:
        stats.append(_run_robot(rt.visits, params))
        _clean_cells(rt.visits, field, remaining)
    makespan = max((s.travel_s + s.clean_s for s in stats), default=0.0)
    total_battery = math.fsum(s.battery_pct for s in stats)
    return SimReport(makespan, tuple(stats), total_battery, math.fsum(remaining.values()), len(seen))


def boustrophedon_order(grid: GridMap) -> list[Coord]:
    """Full-coverage column serpentine: columns left to right, scan direction
    alternating with each occupied column."""
    by_col: dict[int, list[int]] = {}
    for x, y in grid.free_cells():
        by_col.setdefault(x, []).append(y)
    order: list[Coord] = []
    for i, x in enumerate(sorted(by_col)):
        ys = sorted(by_col[x], reverse=bool(i % 2))
        order.extend((x, y) for y in ys)
    return order


def simulate_baseline(grid: GridMap, dirt_map: DirtMap, field: DirtField, params: SimParams) -> SimReport:
    """One robot sweeps every free cell in boustrophedon order with the same
    dwell mapping and cleaning rules as the team."""
    visits = tuple((c, dwell_time(dirt_map.rates[c])) for c in boustrophedon_order(grid))
    remaining = dict(field.amounts)
    st = _run_robot(visits, params)
    _clean_cells(visits, field, remaining)
    return SimReport(
        st.travel_s + st.clean_s,
        (st,),
        st.battery_pct,
        math.fsum(remaining.values()),
        len(visits),
    )


def compare(team: SimReport, baseline: SimReport) -> ComparisonReport:
    """Team-over-baseline ratios plus the qualitative consistency flag
    (makespan ratio at most 0.45, battery ratio within [1.0, 1.25])."""
    if baseline.makespan == 0:
        raise DegenerateScenarioError("baseline makespan is zero")
    mk = team.makespan / baseline.makespan
    bat = team.total_battery_pct / baseline.total_battery_pct
    return ComparisonReport(
        mk,
        bat,
        team.residual_dirt - baseline.residual_dirt,
        mk <= 0.45 and 1.0 <= bat <= 1.25,
    )
