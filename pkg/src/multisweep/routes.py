"""Per-region visit orders via branching nearest neighbor, plus dwell times.

A route is a visit order over a region's cells, not a grid walk: consecutive
visits need not be adjacent, and the simulator charges Manhattan travel
between them. The planner extends greedily from the latest visit; when
several unvisited cells tie for nearest it branches into every tied
continuation, completes them all, and keeps the shortest (ties between
completed routes broken by lexicographic visit order). plan_route repeats
that from every start and keeps the overall best.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BranchOverflowError, ConsistencyError, DomainError
from .grid import Coord, DirtMap


@dataclass(frozen=True)
class Route:
    """Ordered visits for one region: ((x, y), dwell_seconds) per cell.

    branch_overflow records that the planner hit its branch cap and degraded
    to first-tied-only extension for at least one step.
    """

    region_id: int
    visits: tuple[tuple[Coord, float], ...]
    travel_distance: float
    branch_overflow: bool = False

    @property
    def start(self) -> Coord:
        return self.visits[0][0]

    @property
    def end(self) -> Coord:
        return self.visits[-1][0]

    def cells(self) -> list[Coord]:
        return [c for c, _ in self.visits]


def cell_distance(a: Coord, b: Coord) -> int:
    """Manhattan distance between cell centers, in cell units."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


_DWELL_BUCKETS = ((12, 0.0), (26, 1.0), (39, 1.5), (51, 2.0), (64, 2.5), (77, 3.0))


def dwell_time(lam: float) -> float:
    """Cleaning seconds for a dirt level: bucketed on floor(lam), with levels
    above the top bucket clamped to 3 s."""
    if lam < 0:
        raise DomainError(f"negative dirt level {lam}")
    b = math.floor(lam)
    for hi, seconds in _DWELL_BUCKETS:
        if b <= hi:
            return seconds
    return 3.0


def _distance_matrix(cities: list[Coord]) -> np.ndarray:
    xs = np.array([c[0] for c in cities], dtype=np.int64)
    ys = np.array([c[1] for c in cities], dtype=np.int64)
    return np.abs(xs[:, None] - xs[None, :]) + np.abs(ys[:, None] - ys[None, :])


def _best_branch(dists: np.ndarray, orders: np.ndarray) -> tuple[int, tuple[int, ...]]:
    """Minimum-distance branch; equal distances resolved by lexicographic
    visit order (city indices are already in coord-lex order)."""
    best = dists.min()
    cand = orders[dists == best]
    if cand.shape[0] > 1:
        cand = cand[np.lexsort(cand.T[::-1])[:1]]
    return int(best), tuple(int(j) for j in cand[0])


def _check_args(cities: list[Coord], branch_cap: int, on_overflow: str):
    if not cities:
        raise DomainError("cannot plan a route over an empty cell set")
    if branch_cap < 1:
        raise DomainError(f"branch cap must be at least 1, got {branch_cap}")
    if on_overflow not in ("degrade", "raise"):
        raise DomainError(f"on_overflow must be 'degrade' or 'raise', got {on_overflow!r}")


def plan_route_from(
    cells,
    start: Coord,
    *,
    branch_cap: int = 10_000,
    on_overflow: str = "degrade",
) -> Route:
    """Best route beginning at start (dwell times left at 0)."""
    cities = sorted(set(cells))
    _check_args(cities, branch_cap, on_overflow)
    if start not in set(cities):
        raise ConsistencyError(f"start {start} not in the cell set")
    if len(cities) == 1:
        return Route(0, ((cities[0], 0.0),), 0)
    D = _distance_matrix(cities)
    dists, orders, overflow = _kernels.complete_from_start(D, cities.index(start), branch_cap)
    if overflow and on_overflow == "raise":
        raise BranchOverflowError(f"branching exceeded cap {branch_cap} from start {start}")
    dist, order = _best_branch(dists, orders)
    return Route(0, tuple((cities[j], 0.0) for j in order), dist, overflow)


def plan_route(cells, *, branch_cap: int = 10_000, on_overflow: str = "degrade") -> Route:
    """Best route over every possible start (dwell times left at 0)."""
    cities = sorted(set(cells))
    _check_args(cities, branch_cap, on_overflow)
    if len(cities) == 1:
        return Route(0, ((cities[0], 0.0),), 0)
    D = _distance_matrix(cities)
    best: tuple[int, tuple[int, ...]] | None = None
    any_overflow = False
    for i0 in range(len(cities)):
        dists, orders, overflow = _kernels.complete_from_start(D, i0, branch_cap)
        if overflow and on_overflow == "raise":
            raise BranchOverflowError(f"branching exceeded cap {branch_cap} from start {cities[i0]}")
        any_overflow = any_overflow or overflow
        cand = _best_branch(dists, orders)
        if best is None or cand < best:
            best = cand
    dist, order = best
    return Route(0, tuple((cities[j], 0.0) for j in order), dist, any_overflow)


def annotate_route(order, dirt_map: DirtMap, region_id: int | None = None) -> Route:
    """Attach per-cell dwell seconds and the total travel distance to a visit
    order (a Route or a plain coordinate sequence)."""
    if isinstance(order, Route):
        rid = order.region_id if region_id is None else region_id
        overflow = order.branch_overflow
        cells = order.cells()
    else:
        rid = 0 if region_id is None else region_id
        overflow = False
        cells = [tuple(c) for c in order]
    for c in cells:
        if c not in dirt_map.rates:
            raise ConsistencyError(f"cell {c} not in the dirt map")
    visits = tuple((c, dwell_time(dirt_map.rates[c])) for c in cells)
    distance = sum(cell_distance(a, b) for a, b in zip(cells, cells[1:]))
    return Route(rid, visits, distance, overflow)
